pub mod compare;
pub mod genus1;
pub mod laurent;
pub mod local;
pub mod phylo;
pub mod xi;
