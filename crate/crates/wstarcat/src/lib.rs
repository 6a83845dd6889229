pub mod linalg;
pub mod algebra;
pub mod modcat;
pub mod bimod;
pub mod funcat;
pub mod doc;
pub mod cli;
