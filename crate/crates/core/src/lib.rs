//! Mod-p first and second homology of finitely presented groups via Hopf's formula.

pub mod fplinalg;
pub mod hopf;
pub mod oracle;
pub mod presentation;
pub mod rewrite;
pub mod words;
