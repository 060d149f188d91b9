//! Approximate solutions: perturbed spheres joined by catenoidal necks.

pub mod config;
pub mod glue;
pub mod green;
pub mod lambda;
pub mod neck;
pub mod sphere;

pub use config::Configuration;
pub use glue::{glue, glue_with_layout, GlueLayout, GluedSurface, Region};
pub use green::{green_closed, green_function, green_value, legendre_series};
pub use lambda::{lambda_invert, lambda_map, LambdaTable};
pub use neck::{fit_neck, NeckFit, NeckSpec};
pub use sphere::{perturbed_sphere, Pole, SphereGraph};
