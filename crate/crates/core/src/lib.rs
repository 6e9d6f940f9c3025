//! Exact computations with matrix groups over the finite local rings
//! `Z/p^l` and `F_q[t]/(t^l)`: Gelfand–Graev (Whittaker) multiplicities,
//! regular elements, congruence subgroups and exact character tables.

pub mod error;
pub mod field;
pub mod ring;
pub mod poly;
pub mod mat;
pub mod smith;
pub mod cyclo;
pub mod cache;
pub mod group;
pub mod regular;
pub mod whittaker;
pub mod modp;
pub mod classes;
pub mod chartab;

pub use error::{Error, Result};
pub use ring::{primitive_char, AdditiveChar, Ring, RingDesc, RingElem, RingKind};
pub use mat::Mat;
pub use poly::Poly;
pub use cyclo::CycloNum;
pub use group::{Family, GroupSpec, GroupTable, SubgroupHandle};
pub use chartab::CharTable;
pub use classes::ClassData;
