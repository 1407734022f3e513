//! The combined analysis of one solution.

use serde::{Deserialize, Serialize};

use crate::monoid::{DValue, Monoid};
use crate::nilpotency::{
    nilpotency_report, uniform_components, Budgets, FalsifierOutcome, LyubashenkoCertificate, NcVerdict, RackBound,
    UniformReport, Verdict,
};
use crate::perm::Nilpotency;
use crate::retract::{mpl, MplResult};
use crate::solution::{PermGroupReport, Solution, SolutionStats};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome")]
pub enum GroupsOutcome {
    Computed(PermGroupReport),
    CapExceeded { group: String, cap: usize },
}

/// `ℒ_u` members of one size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LuLevel {
    pub size: usize,
    pub members: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NilpotencySummary {
    pub lyubashenko: Option<LyubashenkoCertificate>,
    pub rack_bound: Option<RackBound>,
    pub lambda_group: Option<Nilpotency>,
    pub malcev_falsifier: Option<FalsifierOutcome>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub name: Option<String>,
    pub n: usize,
    pub validation: String,
    pub stats: SolutionStats,
    pub mpl: MplResult,
    pub groups: GroupsOutcome,
    pub d: DValue,
    pub lu: Vec<LuLevel>,
    pub uniform_components: Option<UniformReport>,
    pub nc: Option<NcVerdict>,
    pub nilpotency: NilpotencySummary,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<u64>,
}

pub fn analyze(s: &Solution, budgets: &Budgets) -> AnalysisReport {
    let m = Monoid::with_cap(s, budgets.node_cap);
    let groups = match s.perm_group_report(budgets.closure_cap) {
        Ok(g) => GroupsOutcome::Computed(g),
        Err(e) => GroupsOutcome::CapExceeded { group: e.group, cap: e.cap },
    };
    let nil = nilpotency_report(&m, budgets);
    let uniform = nil.d.get().map(|d| uniform_components(&m, d, budgets));
    let lu = uniform
        .as_ref()
        .map(|u| u.levels.iter().map(|l| LuLevel { size: l.level, members: l.lu.clone() }).collect())
        .unwrap_or_default();
    AnalysisReport {
        name: s.name.clone(),
        n: s.n(),
        validation: "valid".into(),
        stats: s.stats(),
        mpl: mpl(s).expect("retracts of a valid solution are valid"),
        groups,
        d: nil.d,
        lu,
        uniform_components: uniform,
        nc: nil.nc,
        nilpotency: NilpotencySummary {
            lyubashenko: nil.lyubashenko,
            rack_bound: nil.rack_bound,
            lambda_group: nil.lambda_group,
            malcev_falsifier: nil.malcev_falsifier,
            verdict: nil.verdict,
        },
        timing_ms: None,
    }
}
