pub mod exact;
pub mod extract;
pub mod maps;
pub mod orbit;
pub mod precision;
pub mod reference;
pub mod series;
pub mod templates;
