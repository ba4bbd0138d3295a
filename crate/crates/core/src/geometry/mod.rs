//! Julia set geometry: global and fiber renders, box-counting
//! dimensions, Open Set Condition verification, and exponential
//! shrinking rates.

mod boxdim;
mod grid;
mod osc;
mod render;
mod shrink;

pub use boxdim::{box_dimension_image, box_dimension_points, BoxCounts};
pub use grid::{GridImage, GridSpec, ImageKind};
pub use osc::{osc_check, osc_report_text, Disc, OscReport};
pub use render::{render_fiber, render_global, WordRule};
pub use shrink::{shrink_rate, ShrinkFit};
