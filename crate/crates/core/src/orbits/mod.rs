//! Connecting orbits: the explicit heteroclinic of the Michelson system and
//! the even homoclinic of the 4th-order reversible equation.

pub mod homoclinic;
pub mod kuramoto;

pub use homoclinic::{continuation_in_p, shoot_homoclinic_4d, Continuation, HomoclinicProfile};
pub use kuramoto::{kuramoto_p, KuramotoOrbit};
