use eqp_core::standard_form::*;
use nalgebra::{Matrix3, Vector3};

fn main() {
    let e = 1e-9f64;
    let gram = MinkowskiGram {
        alpha: 2.0 * e,
        beta: Vector3::new(0.0, e, 0.0),
        gamma: Matrix3::from_diagonal(&Vector3::new(0.0, 2.0 * e, 0.0)),
    };
    println!("roots: {:?}", solve_lambda(&gram));
    println!("boost: {:?}", boost_from_gram(&gram).map(|b| (b.lambda, b.velocity.norm(), b.rapidity)));
    // analytics: lambda^2 - 3e-18 = 0 -> +-1.732e-9
}
