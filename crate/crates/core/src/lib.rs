//! Twisted convolution algebras of finite groupoids, realized as explicit
//! matrix algebras, together with checkers for their structure theory.

pub mod algebra;
pub mod cocycle;
pub mod fixtures;
pub mod groupoid;
pub mod io;
pub mod linalg;
pub mod random;
pub mod rep;
pub mod sdp;
pub mod state;
pub mod structure;

pub use algebra::{AlgElem, AlgebraError, AlgebraExt, TwistedAlgebra};
pub use cocycle::{build_cocycle, coboundary_from_cochain, Cocycle, CocycleError, TwistElement};
pub use groupoid::{build_groupoid, Arrow, FiniteGroupoid, GroupoidError, GroupoidSpec, SubGroupoid};
pub use random::seeded;
pub use rep::{algebra_image, reduced_norm, regular_rep, wedderburn_blocks, MatrixAlgebra, RepMatrix, StarHom};
pub use state::{extend_state, is_compressible, mult_domain, ConcreteAlgebra, StateError, StateFunctional};
