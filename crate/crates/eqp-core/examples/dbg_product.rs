use eqp_core::pauli::correlations_from_density;
use eqp_core::standard_form::*;
use eqp_core::synthgen::product_state;

fn main() {
    let rho = product_state();
    let corr = correlations_from_density(&rho);
    let eps = 1e-9;
    let mut c_reg = corr.matrix() * (1.0 - eps);
    c_reg[(0,0)] += eps;
    let corr_reg = eqp_core::tomography::CorrelationMatrix::from_matrix(c_reg);
    for side in [Side::Alice, Side::Bob] {
        let g = minkowski_gram(&corr_reg, side);
        println!("side {:?}: alpha={:e}", side, g.alpha);
        println!("  beta = {:?}", g.beta.as_slice());
        println!("  gamma rows:");
        for i in 0..3 { println!("    {:?}", [g.gamma[(i,0)], g.gamma[(i,1)], g.gamma[(i,2)]]); }
        let eig = nalgebra::SymmetricEigen::new(g.gamma);
        println!("  gamma eigvals = {:?}", eig.eigenvalues.as_slice());
        println!("  beta_eig = {:?}", (eig.eigenvectors.transpose() * g.beta).as_slice());
        println!("  solve: {:?}", solve_lambda(&g));
        println!("  boost: {:?}", boost_from_gram(&g).map(|b| (b.lambda, b.velocity.norm(), b.rapidity, b.condition)));
    }
}
