//! The full verification suite over the standard parameter ranges.

use crate::algebra::Checker;
use crate::bethe::{bethe_correspondence, verify_abelian_degenerations, verify_appendix_b};
use crate::error::Result;
use crate::gw::{verify_cross_paths, verify_degenerations, verify_main_theorem, verify_p1_example};
use crate::qdiff::verify_compatibility;
use crate::quot::verify_counts;
use crate::report::Report;

/// `(r, n, max total degree)` for the main theorem, cross paths and degenerations.
pub const MAIN_RANGES: [(usize, usize, u32); 4] = [(1, 2, 5), (1, 3, 3), (2, 3, 3), (2, 4, 3)];
pub const OPS_RANGES: [(usize, u32); 2] = [(2, 5), (3, 5)];
pub const APPENDIX_RANGE: (usize, usize, u32) = (2, 3, 3);
pub const BETHE_RANGES: [(usize, usize); 3] = [(1, 2), (2, 3), (2, 4)];

fn merged(command: &str, parts: Vec<(String, Report)>) -> Report {
    let mut out = Report::new(command, Vec::new());
    for (name, rep) in parts {
        out.absorb(&name, rep);
    }
    out
}

pub fn worked_example(checker: &Checker) -> Result<Report> {
    verify_p1_example(3, checker)
}

pub fn main_theorem(checker: &Checker) -> Result<Report> {
    let parts = MAIN_RANGES
        .iter()
        .map(|&(r, n, d)| Ok((format!("r={r} n={n}"), verify_main_theorem(r, n, d, checker)?)))
        .collect::<Result<_>>()?;
    Ok(merged("main", parts))
}

pub fn cross_paths(checker: &Checker) -> Result<Report> {
    let parts = MAIN_RANGES
        .iter()
        .map(|&(r, n, d)| Ok((format!("r={r} n={n}"), verify_cross_paths(r, n, d, checker)?)))
        .collect::<Result<_>>()?;
    Ok(merged("cross", parts))
}

pub fn invariants() -> Result<Report> {
    verify_counts(5, 4)
}

/// Annihilation and both balanced identities.
pub fn operators(checker: &Checker) -> Result<Report> {
    let parts = OPS_RANGES
        .iter()
        .map(|&(n, t)| Ok((format!("n={n}"), verify_compatibility(n, t, checker)?)))
        .collect::<Result<_>>()?;
    Ok(merged("ops", parts))
}

pub fn appendix_b(checker: &Checker) -> Result<Report> {
    let (r, n, t) = APPENDIX_RANGE;
    verify_appendix_b(r, n, t, checker)
}

pub fn bethe(checker: &Checker) -> Result<Report> {
    let parts = BETHE_RANGES
        .iter()
        .map(|&(r, n)| Ok((format!("r={r} n={n}"), bethe_correspondence(r, n, checker)?)))
        .collect::<Result<_>>()?;
    Ok(merged("bethe", parts))
}

pub fn degenerations(checker: &Checker) -> Result<Report> {
    let mut parts = Vec::new();
    for &(r, n, d) in &MAIN_RANGES {
        parts.push((format!("r={r} n={n}"), verify_degenerations(r, n, d, checker)?));
        parts.push((format!("r={r} n={n}"), verify_abelian_degenerations(r, n, d, checker)?));
    }
    Ok(merged("degenerations", parts))
}

/// Every part of the suite, in a fixed order.
pub fn suite_parts(checker: &Checker) -> Result<Vec<(String, Report)>> {
    Ok(vec![
        ("worked-example".into(), worked_example(checker)?),
        ("main".into(), main_theorem(checker)?),
        ("cross".into(), cross_paths(checker)?),
        ("invariants".into(), invariants()?),
        ("ops".into(), operators(checker)?),
        ("appendix-b".into(), appendix_b(checker)?),
        ("bethe".into(), bethe(checker)?),
        ("degenerations".into(), degenerations(checker)?),
    ])
}

pub fn run_suite(checker: &Checker) -> Result<Report> {
    Ok(merged("suite", suite_parts(checker)?))
}
