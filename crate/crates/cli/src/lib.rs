//! The `isg` command line and the acceptance suite behind `isg accept`.

pub mod accept;
mod app;
mod selftest;

pub use app::{run, DEFAULT_SEED};
