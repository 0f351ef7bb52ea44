//! Construction of solution components (solver-grade, greedy, random) and
//! expansion of single seeds into populations.

mod knapsack;
mod population;
mod tour;

pub use knapsack::{dp_knapsack, greedy_knapsack, random_packing, DP_CELL_LIMIT};
pub use population::{expand_to_population, expand_into, swap_mutation};
pub use tour::{greedy_tour, or_opt_pass, random_tour, solver_tour, two_opt_pass, DEFAULT_TOUR_PASSES};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{kp_to_packing_plan, PackingPlan, Tour, TtpInstance};
use crate::rng::DttpRng;
use crate::scalar::Scalar;

/// How a solution component is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComponentMethod {
    Solver,
    Greedy,
    Random,
}

impl ComponentMethod {
    pub const ALL: [ComponentMethod; 3] =
        [ComponentMethod::Solver, ComponentMethod::Greedy, ComponentMethod::Random];

    pub fn letter(self) -> char {
        match self {
            ComponentMethod::Solver => 's',
            ComponentMethod::Greedy => 'g',
            ComponentMethod::Random => 'r',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c.to_ascii_lowercase() {
            's' => Some(ComponentMethod::Solver),
            'g' => Some(ComponentMethod::Greedy),
            'r' => Some(ComponentMethod::Random),
            _ => None,
        }
    }
}

pub fn construct_tour<F: Scalar>(
    method: ComponentMethod,
    inst: &TtpInstance<F>,
    rng: &mut DttpRng,
) -> Tour {
    match method {
        ComponentMethod::Solver => solver_tour(inst, DEFAULT_TOUR_PASSES),
        ComponentMethod::Greedy => greedy_tour(inst),
        ComponentMethod::Random => random_tour(inst, rng),
    }
}

/// Solver packing is the exact DP selection, falling back to the greedy
/// selection when the DP table would be too large.
pub fn construct_packing<F: Scalar>(
    method: ComponentMethod,
    inst: &TtpInstance<F>,
    rng: &mut DttpRng,
) -> Result<PackingPlan> {
    let selection = match method {
        ComponentMethod::Solver => match dp_knapsack(inst) {
            Ok(sel) => sel,
            Err(Error::TooLargeForDp { .. }) => greedy_knapsack(inst),
            Err(e) => return Err(e),
        },
        ComponentMethod::Greedy => greedy_knapsack(inst),
        ComponentMethod::Random => random_packing(inst, rng),
    };
    kp_to_packing_plan(&selection, inst)
}
