//! Requirements-driven testing for cyber-physical systems.
//!
//! Requirements and V&V properties are turned into executable test stories,
//! run against capability-matched backends across levels of fidelity,
//! monitored post hoc, and traced to safety claims.
//!
//! The geometry and statistics kernels are generic over [`num::Scalar`];
//! the domain model works in `f64`, exposed through the aliases below.

// `!(x > 0.0)` is how validation rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod geom;
pub mod ids;
pub mod lang;
pub mod model;
pub mod monitor;
pub mod num;
pub mod orchestrator;
pub mod sim;
pub mod store;

pub type Vec3 = num::Vector3<f64>;
pub type Aabb = geom::Aabb<f64>;
pub type Vec3f = num::Vector3<f32>;
pub type Aabbf = geom::Aabb<f32>;
