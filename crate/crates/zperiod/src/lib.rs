//! Exact T-systems, Y-systems and tropical T-systems on bipartite recurrent
//! quivers, together with the checks that tie periodicity to admissibility.

pub mod ade;
pub mod assign;
pub mod birational;
pub mod duality;
pub mod equilibrium;
pub mod families;
pub mod graph;
pub mod iso;
pub mod laurent;
pub mod lp;
pub mod spec;
pub mod tropical;
pub mod twist;
pub mod verify;

pub use ade::{is_admissible, AdeType, AdmissibilityReport};
pub use families::FamilySpec;
pub use graph::{Bigraph, BipartiteQuiver, Quiver};
pub use spec::{parse_spec, GraphSpec};
