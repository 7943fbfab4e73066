use std::fmt;

use rayon::prelude::*;

use super::engine::{check_side, substitute, Bindings};
use super::rules::{Embedding, Instantiation, RewriteRule};
use crate::elaborate_pair;
use crate::semantics::{adjoint, compose, direct_sum, equal_matrices, eval, ExactMatrix, MatrixEq, PhaseMode};

/// Largest matrix dimension a rule instance is checked at.
pub const MAX_DIM: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// First entry where `lhs` and `w^phase rhs` differ; `found_phase` is the
    /// phase that would make them equal, if any.
    Mismatch { row: usize, col: usize, lhs: String, rhs: String, found_phase: Option<u8> },
    Error(String),
}

#[derive(Clone, Debug)]
pub struct InstanceReport {
    pub inst: Instantiation,
    pub dim: Option<usize>,
    pub outcome: Outcome,
}

#[derive(Clone, Debug)]
pub struct RuleReport {
    pub rule: String,
    pub family: String,
    pub phase: u8,
    pub instances: Vec<InstanceReport>,
}

impl RuleReport {
    pub fn passed(&self) -> bool {
        !self.instances.is_empty() && self.instances.iter().all(|i| i.outcome == Outcome::Pass)
    }
}

impl fmt::Display for RuleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ok = self.instances.iter().filter(|i| i.outcome == Outcome::Pass).count();
        let status = if self.passed() { "pass" } else { "FAIL" };
        write!(f, "{:<14} {:<10} {status}  {ok}/{}", self.rule, self.family, self.instances.len())?;
        if self.phase != 0 {
            write!(f, "  phase w^{}", self.phase)?;
        }
        for i in &self.instances {
            match &i.outcome {
                Outcome::Pass => {}
                Outcome::Mismatch { row, col, lhs, rhs, found_phase } => {
                    write!(f, "\n    [{}] entry ({row}, {col}): {lhs} vs {rhs}", i.inst)?;
                    if let Some(k) = found_phase {
                        write!(f, " (equal up to w^{k})")?;
                    }
                }
                Outcome::Error(e) => write!(f, "\n    [{}] error: {e}", i.inst)?,
            }
        }
        Ok(())
    }
}

fn embed(m: &ExactMatrix, e: &Embedding) -> Result<ExactMatrix, String> {
    let d = m.rows();
    if e.map.len() != d || e.dim < d {
        return Err(format!("embedding {:?} into {} does not fit a {d}-dimensional rule", e.map, e.dim));
    }
    let mut perm = e.map.clone();
    perm.extend((0..e.dim).filter(|j| !e.map.contains(j)));
    let p = ExactMatrix::permutation(&perm);
    let padded = direct_sum(m, &ExactMatrix::identity(e.dim - d));
    Ok(compose(&compose(&p, &padded), &adjoint(&p)))
}

fn run_instance(rule: &RewriteRule, inst: &Instantiation) -> Result<(usize, Outcome), String> {
    let mut b: Bindings = inst.bind.clone();
    check_side(&rule.side, &mut b)?;
    let lhs = substitute(&rule.lhs, &b)?;
    let rhs = substitute(&rule.rhs, &b)?;
    let ty = inst.ty.as_ref().or(rule.ty.as_ref()).map(|(a, b)| (a, b));
    let (tl, tr) = elaborate_pair(&lhs, &rhs, ty).map_err(|e| e.to_string())?;
    let dim = tl.src.dimension().max(tl.tgt.dimension());
    if dim > MAX_DIM {
        return Err(format!("dimension {dim} exceeds {MAX_DIM}"));
    }
    let (mut ml, mut mr) = (eval(&tl), eval(&tr));
    if let Some(e) = &inst.embed {
        if e.dim > MAX_DIM {
            return Err(format!("embedding dimension {} exceeds {MAX_DIM}", e.dim));
        }
        ml = embed(&ml, e)?;
        mr = embed(&mr, e)?;
    }
    let dim = ml.rows();
    let want = mr.scale_omega(rule.phase as i64);
    if ml == want {
        return Ok((dim, Outcome::Pass));
    }
    if (ml.rows(), ml.cols()) != (want.rows(), want.cols()) {
        return Err(format!("shapes differ: {}x{} vs {}x{}", ml.rows(), ml.cols(), want.rows(), want.cols()));
    }
    let found_phase = match equal_matrices(&ml, &mr, PhaseMode::UpToOmegaPower) {
        MatrixEq::Equal => Some(0),
        MatrixEq::EqualWithPhase(k) => Some(k),
        MatrixEq::NotEqual => None,
    };
    let (row, col) = (0..ml.rows())
        .flat_map(|r| (0..ml.cols()).map(move |c| (r, c)))
        .find(|&(r, c)| ml.get(r, c) != want.get(r, c))
        .expect("matrices differ somewhere");
    Ok((
        dim,
        Outcome::Mismatch { row, col, lhs: ml.get(row, col).to_string(), rhs: want.get(row, col).to_string(), found_phase },
    ))
}

/// Check `eval(lhs) = w^phase eval(rhs)` exactly at each instantiation.
pub fn validate_rule(rule: &RewriteRule, insts: &[Instantiation]) -> RuleReport {
    let instances = insts
        .par_iter()
        .map(|inst| match run_instance(rule, inst) {
            Ok((dim, outcome)) => InstanceReport { inst: inst.clone(), dim: Some(dim), outcome },
            Err(e) => InstanceReport { inst: inst.clone(), dim: None, outcome: Outcome::Error(e) },
        })
        .collect();
    RuleReport { rule: rule.name.clone(), family: rule.family.clone(), phase: rule.phase, instances }
}

/// Validate every rule at its shipped instantiations, in catalog order.
pub fn validate_all(rules: &[RewriteRule]) -> Vec<RuleReport> {
    rules.par_iter().map(|r| validate_rule(r, &r.shipped_instantiations())).collect()
}
