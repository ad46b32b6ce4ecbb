//! Gaussian kernel operators on Fock space: composition and trace in closed
//! form, compared against truncated Fock matrices.

use fockweyl::fock::{kernel_to_matrix, FockBasisSpec};
use fockweyl::gaussian::GaussianKernelOp;
use fockweyl::C64;
use nalgebra::DMatrix;

fn main() -> fockweyl::Result<()> {
    let lambda = 1.0;
    let k1 = GaussianKernelOp::new(
        C64::new(0.8, 0.3),
        vec![C64::new(0.4, -0.1)],
        vec![C64::new(-0.3, 0.5)],
        DMatrix::from_element(1, 1, C64::new(0.15, 0.1)),
        lambda,
    )?;
    let k2 = GaussianKernelOp::new(
        C64::new(-0.2, 1.1),
        vec![C64::new(-0.6, 0.2)],
        vec![C64::new(0.1, 0.3)],
        DMatrix::from_element(1, 1, C64::new(-0.1, 0.2)),
        lambda,
    )?;

    let prod = k1.compose(&k2)?;
    println!("k1∘k2 = {}", serde_json::to_string(&prod).unwrap());
    println!("Tr(k1∘k2) = {}", prod.trace()?);
    println!("Tr(k2∘k1) = {}", k2.compose(&k1)?.trace()?);

    for degree in [8, 16, 24, 30] {
        let spec = FockBasisSpec::new(1, lambda, degree);
        let m = kernel_to_matrix(&prod, &spec)?;
        println!("degree {degree:>2}: truncated trace {:.15}", m.trace());
    }
    Ok(())
}
