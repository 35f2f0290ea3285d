pub mod automata;
pub mod commensurator;
pub mod error;
pub mod exact_linear;
pub mod free_rat;
pub mod glz_rat;
pub mod oracle;
pub mod flat_rat;
pub mod singular;
pub mod dichotomy;
pub mod syntax;
