//! Exemplar translators: closed forms, the rotational profile equation, and
//! graphical solutions of the nonlinear height equation, plus far-field
//! asymptotics.

pub mod asymptotic;
pub mod grim;
pub mod pde;
pub mod profile;
pub mod revolve;
