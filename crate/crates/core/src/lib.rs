pub mod centralizer;
pub mod chars;
pub mod exactla;
pub mod groups;
pub mod orbitals;
pub mod report;
pub mod scheme;
pub mod switching;
pub mod tables;
pub mod wedderburn;
