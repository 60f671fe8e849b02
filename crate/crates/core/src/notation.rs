//! Printing and parsing of weights and weight tuples.

use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Error, Result};
use crate::linalg::Q;

fn coeff_prefix(c: &Q) -> String {
    if c.is_one() {
        String::new()
    } else if *c == -Q::one() {
        "-".to_string()
    } else if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("({c})")
    }
}

/// `2ω1+ω3`, with `labels[k]` the 1-based index printed for coordinate `k`.
pub fn format_weight_labeled(w: &[Q], labels: &[usize], suffix: &str) -> String {
    let mut out = String::new();
    for (k, c) in w.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut piece = format!("{}ω{}{}", coeff_prefix(&c.abs()), labels[k], suffix);
        if c.is_negative() {
            piece = format!("-{piece}");
            out.push_str(&piece);
        } else {
            if !out.is_empty() {
                out.push('+');
            }
            out.push_str(&piece);
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

pub fn format_weight(w: &[Q]) -> String {
    let labels: Vec<usize> = (1..=w.len()).collect();
    format_weight_labeled(w, &labels, "")
}

pub fn format_weight_i(w: &[i64]) -> String {
    let q: Vec<Q> = w.iter().map(|&x| Q::from_integer(x.into())).collect();
    format_weight(&q)
}

/// Weight of the derived Levi, coordinates on the simple roots `nodes` (0-based) of the group.
pub fn format_levi_weight(w: &[Q], nodes: &[usize]) -> String {
    let labels: Vec<usize> = nodes.iter().map(|j| j + 1).collect();
    format_weight_labeled(w, &labels, "^L")
}

pub fn format_rational(x: &Q) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        x.to_string()
    }
}

pub fn parse_rational(text: &str) -> Result<Q> {
    let t = text.trim();
    let bad = || Error::Invalid(format!("malformed number '{t}'"));
    if let Some((n, d)) = t.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return invalid(format!("zero denominator in '{t}'"));
        }
        Ok(Q::new(n.into(), d.into()))
    } else {
        let n: i64 = t.parse().map_err(|_| bad())?;
        Ok(Q::from_integer(n.into()))
    }
}

/// One weight `[a,b,c]` in fundamental-weight coordinates.
pub fn parse_weight(text: &str, rank: usize) -> Result<Vec<Q>> {
    let t = text.trim();
    let Some(inner) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) else {
        return invalid(format!("weight '{t}' must look like [a,b,...]"));
    };
    let v: Vec<Q> = inner
        .split(',')
        .map(parse_rational)
        .collect::<Result<_>>()?;
    if v.len() != rank {
        return invalid(format!("weight '{t}' has {} entries, expected {rank}", v.len()));
    }
    Ok(v)
}

/// Weights separated by `;`.
pub fn parse_weight_list(text: &str, rank: usize) -> Result<Vec<Vec<Q>>> {
    if text.trim().is_empty() {
        return invalid("empty weight list");
    }
    text.split(';').map(|p| parse_weight(p, rank)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{qr, qvec};

    #[test]
    fn formats() {
        assert_eq!(format_weight(&qvec(&[0, 1, 1, 0])), "ω2+ω3");
        assert_eq!(format_weight(&qvec(&[2, 0])), "2ω1");
        assert_eq!(format_weight(&qvec(&[0, 0])), "0");
        assert_eq!(format_weight(&qvec(&[0, -1, 1, 0])), "-ω2+ω3");
        assert_eq!(format_weight(&[qr(-1, 2), q0()]), "-(1/2)ω1");
        assert_eq!(format_levi_weight(&qvec(&[0, 1, 1]), &[1, 2, 3]), "ω3^L+ω4^L");
    }

    fn q0() -> Q {
        Q::zero()
    }

    #[test]
    fn parses() {
        let w = parse_weight_list("[0,1,0,0];[0,1/2,0,0]", 4).unwrap();
        assert_eq!(w[1][1], qr(1, 2));
        assert!(parse_weight_list("", 4).is_err());
        assert!(parse_weight_list("[0,1]", 4).is_err());
        assert!(parse_weight_list("0,1,0,0", 4).is_err());
    }
}
