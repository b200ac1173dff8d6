//! Solves the 1D and 2D Strang-corrected Laplacian problems with V-cycles
//! and prints the iteration counts per grid size.

use dctmg::{generator, ExperimentSpec, Method, ProjectorOrder, ZeroLocation};

fn main() -> dctmg::Result<()> {
    println!("{:>4} {:>6} {:>6}", "dim", "m", "iters");
    for dim in [1, 2] {
        let spec = ExperimentSpec {
            dim,
            r: ProjectorOrder::Fixed(1),
            method: Method::Vcycle,
            sizes: vec![64, 128, 256],
            ..ExperimentSpec::default()
        };
        let f = generator::<f64>(ZeroLocation::Origin, spec.q, dim)?;
        println!("f = {:?}", f.poly.to_rows());
        for &m in &spec.sizes {
            let report = spec.run::<f64>(m)?;
            println!("{dim:>4} {m:>6} {:>6}", report.iterations);
        }
    }
    Ok(())
}
