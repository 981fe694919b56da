//! Planning for reconnaissance missions in which a drone must both reach
//! points of interest and get what it observed back to base, while every
//! crossing and every transmission risks ending the mission.
//!
//! - [`mission`]: graphs, plans, file formats and special instances.
//! - [`evaluator`]: closed-form survival and expected transmitted information.
//! - [`exact`]: bounded-horizon dynamic program and exhaustive enumeration.
//! - [`milp`]: the mixed-integer linear model, LP export and solution import.
//! - [`genetic`]: the genetic algorithm for one or several drones.
//! - [`bench`]: seeded benchmark grid over the bundled instances.

pub mod bench;
pub mod evaluator;
pub mod exact;
pub mod genetic;
pub mod instances;
pub mod milp;
pub mod mission;

pub use evaluator::{
    delivery_probabilities, expected_value_multi, expected_value_single, survival_probability,
    EvalBreakdown,
};
pub use mission::{Mission, MultiPlan, Plan, BASE};
