// Development scratch: kernel timings at acceptance scale.
use bszlab_core::coefficients::{lambda_from_tau, tau_table};
use bszlab_core::fixed::Frac192;
use bszlab_core::phase::{exp_sum, Phase, PhasePolynomial};

fn main() {
    let x = 1u64 << 20;
    let t0 = std::time::Instant::now();
    let tau = tau_table(x).unwrap();
    println!("tau(2^20): {:?}", t0.elapsed());
    let lam = lambda_from_tau(&tau).unwrap();
    let t0 = std::time::Instant::now();
    let p = Phase::Poly(PhasePolynomial::new(vec![Frac192::from_u64_ratio(377, 1000).unwrap()]).unwrap());
    let s = exp_sum(&lam, &p, x).unwrap();
    let dt = t0.elapsed();
    println!("exp_sum linear 2^20: {:?} -> |S| = {:.4}", dt, s.norm());
    println!("projected 1000-alpha Jutila sweep: {:.1?}", dt * 1000);
    let t0 = std::time::Instant::now();
    let p2 = Phase::Poly(PhasePolynomial::new(vec![Frac192::sqrt_of_integer(2), Frac192::golden()]).unwrap());
    let s2 = exp_sum(&lam, &p2, x).unwrap();
    println!("exp_sum quadratic 2^20: {:?} -> |S| = {:.4}", t0.elapsed(), s2.norm());
}
