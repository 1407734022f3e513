//! The retract relation, retract solutions and multipermutation level.

use serde::{Deserialize, Serialize};

use crate::solution::{Solution, SolutionError};

/// Classes of `x ~ y ⇔ λ_x = λ_y ∧ ρ_x = ρ_y`, numbered by least member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetractPartition {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
}

impl RetractPartition {
    pub fn is_discrete(&self) -> bool {
        self.classes.len() == self.class_of.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome")]
pub enum MplOutcome {
    Finite { level: usize },
    Irretractable { step: usize, size: usize },
    CapExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MplResult {
    #[serde(flatten)]
    pub outcome: MplOutcome,
    pub tower_sizes: Vec<usize>,
}

impl MplResult {
    pub fn level(&self) -> Option<usize> {
        match self.outcome {
            MplOutcome::Finite { level } => Some(level),
            _ => None,
        }
    }
}

pub fn retract_classes(s: &Solution) -> RetractPartition {
    let n = s.n();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = vec![0; n];
    for x in 0..n {
        let found = classes.iter().position(|c| {
            let y = c[0];
            s.lam_table()[x] == s.lam_table()[y] && s.rho_table()[x] == s.rho_table()[y]
        });
        match found {
            Some(i) => {
                classes[i].push(x);
                class_of[x] = i;
            }
            None => {
                class_of[x] = classes.len();
                classes.push(vec![x]);
            }
        }
    }
    RetractPartition { classes, class_of }
}

/// The induced solution on the classes: `r̄(x̄, ȳ) = (λ_x(y)‾, ρ_y(x)‾)`.
pub fn retract(s: &Solution) -> Result<Solution, SolutionError> {
    retract_with(s, &retract_classes(s))
}

fn retract_with(s: &Solution, p: &RetractPartition) -> Result<Solution, SolutionError> {
    let reps: Vec<usize> = p.classes.iter().map(|c| c[0]).collect();
    let lam = reps.iter().map(|&x| reps.iter().map(|&y| p.class_of[s.lam(x, y)]).collect()).collect();
    let rho = reps.iter().map(|&y| reps.iter().map(|&x| p.class_of[s.rho(y, x)]).collect()).collect();
    Solution::new(lam, rho).map_err(|e| SolutionError::InternalValidationFailure { detail: e.to_string() })
}

/// Iterates [`retract`] at most `cap` times.
pub fn mpl_tower(s: &Solution, cap: usize) -> Result<MplResult, SolutionError> {
    let mut cur = s.clone();
    let mut sizes = vec![cur.n()];
    for step in 0..=cap {
        if cur.n() <= 1 {
            return Ok(MplResult { outcome: MplOutcome::Finite { level: step }, tower_sizes: sizes });
        }
        if step == cap {
            break;
        }
        let p = retract_classes(&cur);
        if p.is_discrete() {
            return Ok(MplResult {
                outcome: MplOutcome::Irretractable { step, size: cur.n() },
                tower_sizes: sizes,
            });
        }
        cur = retract_with(&cur, &p)?;
        sizes.push(cur.n());
    }
    Ok(MplResult { outcome: MplOutcome::CapExceeded, tower_sizes: sizes })
}

/// [`mpl_tower`] with the default cap `n`.
pub fn mpl(s: &Solution) -> Result<MplResult, SolutionError> {
    mpl_tower(s, s.n().max(1))
}
