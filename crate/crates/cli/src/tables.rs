//! Every table of the worked D4 and G2 examples.

use std::fmt::Write as _;
use std::sync::Arc;

use anyhow::Result;
use serde_json::json;

use qcone::eigencone::{self, FaceDatum};
use qcone::induction::FaceContext;
use qcone::qschubert::quantum_cohomology;
use qcone::rootsys::RootSystem;

use crate::{invalid, Ctx};

const FACES: &[(&str, usize, &str, i64)] = &[
    ("D4", 0, "s1 | s2 s1 | s4 s2 s1", 1),
    ("D4", 1, "s2 | s3 s1 s2 | s4 s3 s1 s2", 2),
    ("G2", 1, "s1 s2 s1 s2 | s1 s2 | s2", 1),
];

fn group_tables(rs: &Arc<RootSystem>, out: &mut String) -> Result<serde_json::Value> {
    let cone = eigencone::eigen_cone(rs, 3)?;
    let total = cone.cone.inequalities.len();
    writeln!(
        out,
        "{}, s=3: {total} facets = {} dominance + {} alcove + {} regular",
        rs.label(),
        cone.n_dominance,
        cone.n_alcove,
        cone.facets.len()
    )?;
    let mut faces = Vec::new();
    for &(label, i, classes, d) in FACES.iter().filter(|f| f.0 == rs.label()) {
        let qh = quantum_cohomology(rs, &[i])?;
        let cls = qh.par.parse_classes(classes)?;
        let face = FaceDatum::new(&qh, cls, vec![d])?;
        let report = FaceContext::new(face, false)?.report()?;
        writeln!(out)?;
        write!(out, "{report}")?;
        faces.push(json!({"group": label, "report": report}));
    }
    let non_regular = cone.non_regular_rays()?;
    writeln!(out)?;
    writeln!(out, "rays on no regular facet ({} of {})", non_regular.len(), cone.rays()?.len())?;
    for r in &non_regular {
        let note = if r.shape_ok { "" } else { "  shape check failed" };
        writeln!(out, "  {}{note}", r.ray)?;
    }
    Ok(json!({
        "group": rs.label(),
        "facets": {
            "total": total,
            "dominance": cone.n_dominance,
            "alcove": cone.n_alcove,
            "regular": cone.facets.len(),
        },
        "faces": faces,
        "non_regular": non_regular.iter().map(|r| json!({"ray": r.ray.to_string(), "shape_ok": r.shape_ok})).collect::<Vec<_>>(),
    }))
}

pub fn run(ctx: &Ctx) -> Result<String> {
    let groups: Vec<Arc<RootSystem>> = if ctx.global.kind.is_some() {
        let rs = ctx.root_system()?;
        if !FACES.iter().any(|f| f.0 == rs.label()) {
            return Err(invalid("worked tables exist for D4 and G2 only"));
        }
        vec![rs]
    } else {
        ["D4", "G2"]
            .iter()
            .map(|l| RootSystem::parse(l).map(Arc::new))
            .collect::<qcone::Result<_>>()?
    };
    let mut out = String::new();
    let mut docs = Vec::new();
    for (k, rs) in groups.iter().enumerate() {
        if k > 0 {
            writeln!(out)?;
        }
        docs.push(group_tables(rs, &mut out)?);
    }
    ctx.emit(out, json!({"schema": 1, "groups": docs}))
}
