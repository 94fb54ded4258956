//! Batch work: grids of `(m, i)` derivations and many-index coefficient
//! queries. With the `parallel` feature these fan out over rayon; results are
//! always returned in input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::derive::{derive_scheme, Derivation, FunctionalEquation, Scheme};
use crate::error::{Error, Result};
use crate::modular::DigitEvaluator;
use crate::oracle::{verify_scheme, VerificationReport};
use crate::parser::{parse_ratfun, render_ratfun};
use crate::poly::Rat;

/// How batch work is scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Runs sequentially when the `parallel` feature is disabled.
    #[default]
    Parallel,
}

fn map_in_order<T, U, F>(items: &[T], exec: Execution, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// `f_i(n) mod m` for each index, each query with its own memo table.
pub fn scheme_coeff_batch(scheme: &Scheme, indices: &[u64], exec: Execution) -> Vec<u64> {
    map_in_order(indices, exec, |&n| DigitEvaluator::new(scheme).coeff(n))
}

/// Which sections to try for each `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SectionSelect {
    All,
    Fixed(usize),
    /// Integer expression in `m`, such as `m-1`.
    Expr(String),
}

impl SectionSelect {
    /// `all`, `last`, an integer, or an expression in `m`.
    pub fn parse(text: &str) -> SectionSelect {
        let t = text.trim();
        match t {
            "all" => SectionSelect::All,
            "last" => SectionSelect::Expr("m-1".into()),
            _ => match t.parse::<usize>() {
                Ok(k) => SectionSelect::Fixed(k),
                Err(_) => SectionSelect::Expr(t.to_string()),
            },
        }
    }

    fn indices(&self, m: usize) -> Result<Vec<usize>> {
        match self {
            SectionSelect::All => Ok((0..m).collect()),
            SectionSelect::Fixed(k) => Ok(vec![*k]),
            SectionSelect::Expr(e) => {
                let v = parse_ratfun(e, Some(m as u64))?;
                let c = v.constant_term();
                if !v.is_polynomial() || v.num().degree().unwrap_or(0) > 0 || !c.is_integer() {
                    return Err(Error::InvalidArgument(format!("section index {e} is not an integer")));
                }
                usize::try_from(c.to_integer())
                    .map(|k| vec![k])
                    .map_err(|_| Error::InvalidArgument(format!("section index {e} is negative")))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRequest {
    pub s: String,
    pub r: String,
    pub f0: Option<Rat>,
    pub m_from: usize,
    pub m_to: usize,
    pub sections: SectionSelect,
    /// Oracle check length for each scheme found; 0 skips the check.
    pub check_n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellOutcome {
    Miracle {
        scheme: Box<Scheme>,
        check: Option<VerificationReport>,
    },
    NoMiracle {
        proper_part: String,
    },
    Failed(Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanCell {
    pub m: usize,
    /// `None` when the section index itself could not be evaluated.
    pub i: Option<usize>,
    pub outcome: CellOutcome,
}

impl ScanCell {
    /// `MIRACLE`, `no`, or the error kind.
    pub fn verdict(&self) -> &'static str {
        match &self.outcome {
            CellOutcome::Miracle { .. } => "MIRACLE",
            CellOutcome::NoMiracle { .. } => "no",
            CellOutcome::Failed(e) => e.kind(),
        }
    }
}

fn run_cell(req: &ScanRequest, m: usize, i: usize) -> CellOutcome {
    let run = || -> Result<CellOutcome> {
        let mv = Some(m as u64);
        let s = parse_ratfun(&req.s, mv)?;
        let r = parse_ratfun(&req.r, mv)?;
        let fe = FunctionalEquation::new(s, r, m, req.f0.clone())?.with_sources(&req.s, &req.r);
        Ok(match derive_scheme(&fe, i)? {
            Derivation::Scheme(scheme) => {
                let check = if req.check_n > 0 {
                    Some(verify_scheme(&fe, i, &scheme, req.check_n)?)
                } else {
                    None
                };
                CellOutcome::Miracle { scheme: Box::new(scheme), check }
            }
            Derivation::NoMiracle(nm) => CellOutcome::NoMiracle {
                proper_part: render_ratfun(&nm.proper_part),
            },
        })
    };
    run().unwrap_or_else(CellOutcome::Failed)
}

/// Derive every requested cell; rows come back ordered by `(m, i)`.
pub fn scan_grid(req: &ScanRequest, exec: Execution) -> Result<Vec<ScanCell>> {
    if req.m_from < 2 || req.m_from > req.m_to {
        return Err(Error::InvalidArgument(format!(
            "empty or invalid m range {}..={}",
            req.m_from, req.m_to
        )));
    }
    let mut jobs: Vec<(usize, std::result::Result<usize, Error>)> = Vec::new();
    for m in req.m_from..=req.m_to {
        match req.sections.indices(m) {
            Ok(is) => jobs.extend(is.into_iter().map(|i| {
                if i < m {
                    (m, Ok(i))
                } else {
                    (m, Err(Error::InvalidArgument(format!("section {i} not below m = {m}"))))
                }
            })),
            Err(e) => jobs.push((m, Err(e))),
        }
    }
    Ok(map_in_order(&jobs, exec, |(m, i)| match i {
        Ok(i) => ScanCell {
            m: *m,
            i: Some(*i),
            outcome: run_cell(req, *m, *i),
        },
        Err(e) => ScanCell {
            m: *m,
            i: None,
            outcome: CellOutcome::Failed(e.clone()),
        },
    }))
}
