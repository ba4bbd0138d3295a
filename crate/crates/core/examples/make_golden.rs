//! Regenerates the frozen golden render (run once; output is committed).

use semithermo::geometry::{render_global, GridSpec};
use semithermo::{RationalMap, SemigroupSpec};

fn main() {
    let spec = SemigroupSpec::new(vec![
        RationalMap::from_real(&[2.0, 0.0, 1.0], &[1.0]).unwrap(),
        RationalMap::from_real(&[-2.0, 0.0, 1.0], &[1.0]).unwrap(),
    ])
    .unwrap();
    let grid = GridSpec::new((-2.3, 2.3, -2.3, 2.3), 512, 512).unwrap();
    let img = render_global(&spec, 2_000_000, 20250809, grid).unwrap();
    let path = std::env::args().nth(1).expect("output path");
    std::fs::write(&path, img.to_pgm()).unwrap();
    println!("wrote {path}, {} set pixels", img.set_pixels().len());
}
