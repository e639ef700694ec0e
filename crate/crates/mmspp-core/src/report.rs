//! Solver result types shared by every solver in the crate.

use core::fmt;
use core::str::FromStr;

use crate::instance::Solution;
use crate::witness::WitnessCertificate;

/// How a solver's answer relates to the optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// The returned value is the optimum.
    Optimal,
    /// A feasible solution meeting a requested degree target (no optimality
    /// claim).
    FeasibleAtTarget,
    /// The returned value is at most the optimum plus one.
    Additive1,
    /// The returned value is at most twice the optimum.
    Approx2,
    /// The returned value is within the decomposition-depth factor
    /// (⌈log₂ n⌉ + 1) of the optimum.
    LogNFramework,
    /// Feasible, but with no proven quality guarantee.
    Heuristic,
    /// No feasible solution exists at the requested degree target; a
    /// certificate explains why.
    InfeasibleAtTarget,
}

impl SolveStatus {
    /// Stable textual name used in solution files.
    pub fn name(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::FeasibleAtTarget => "feasible-at-target",
            SolveStatus::Additive1 => "additive-1",
            SolveStatus::Approx2 => "approx-2",
            SolveStatus::LogNFramework => "log-n-framework",
            SolveStatus::Heuristic => "heuristic",
            SolveStatus::InfeasibleAtTarget => "infeasible-at-target",
        }
    }
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolveStatus {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "optimal" => SolveStatus::Optimal,
            "feasible-at-target" => SolveStatus::FeasibleAtTarget,
            "additive-1" => SolveStatus::Additive1,
            "approx-2" => SolveStatus::Approx2,
            "log-n-framework" => SolveStatus::LogNFramework,
            "heuristic" => SolveStatus::Heuristic,
            "infeasible-at-target" => SolveStatus::InfeasibleAtTarget,
            _ => return Err(()),
        })
    }
}

/// Cheap counters describing how much work a solve did.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Local-search swaps or target probes, depending on the solver.
    pub iterations: u64,
    /// Claw contractions performed (out-tree solver).
    pub contractions: u64,
    /// Decomposition depth reached (tree framework).
    pub levels: u32,
}

/// The outcome of a solve: an optional solution (absent exactly for
/// [`SolveStatus::InfeasibleAtTarget`]), a quality status, an optional
/// lower-bound certificate and work counters.
#[derive(Debug, Clone)]
pub struct SolveReport {
    /// The routing, if one was produced.
    pub solution: Option<Solution>,
    /// Quality claim for `solution` (or the infeasibility marker).
    pub status: SolveStatus,
    /// Machine-checkable lower bound, when the solver produced one.
    pub certificate: Option<WitnessCertificate>,
    /// Work counters.
    pub stats: SolveStats,
}

impl SolveReport {
    /// Convenience: the objective value of the solution, if present.
    pub fn value(&self) -> Option<u32> {
        self.solution.as_ref().map(|s| s.max_out_degree())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_names_round_trip() {
        for s in [
            SolveStatus::Optimal,
            SolveStatus::FeasibleAtTarget,
            SolveStatus::Additive1,
            SolveStatus::Approx2,
            SolveStatus::LogNFramework,
            SolveStatus::Heuristic,
            SolveStatus::InfeasibleAtTarget,
        ] {
            assert_eq!(s.name().parse::<SolveStatus>(), Ok(s));
        }
        assert!("bogus".parse::<SolveStatus>().is_err());
    }
}
