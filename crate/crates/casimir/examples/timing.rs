use std::time::Instant;

use casimir::dielectric::{OscillatorModel, Permittivity};
use casimir::fresnel::{Plate, TensorMode};
use casimir::graphene::GrapheneSheet;
use casimir::pressure::{delta_p_neq, lifshitz_block, p_neq};

fn coated(delta_ev: f64, mu_ev: f64, temp_k: f64) -> Plate {
    Plate::new(
        Permittivity::Model(OscillatorModel::silica()),
        Some(GrapheneSheet::from_lab(delta_ev, mu_ev, 1.0 / 300.0, temp_k)),
    )
}

fn main() {
    let p300 = coated(0.2, 0.0, 300.0);
    let p500 = coated(0.2, 0.0, 500.0);
    let a = 0.5e-6;

    let t0 = Instant::now();
    let b = lifshitz_block(a, 300.0, &p300, &p300, TensorMode::Auto).unwrap();
    println!(
        "block a=0.5um T=300 Auto: {:.6e} Pa, {} terms, err {:.1e}, {:.2?}",
        b.pressure,
        b.matsubara_terms,
        b.err_est,
        t0.elapsed()
    );

    let t0 = Instant::now();
    let (dp, err) = delta_p_neq(a, 300.0, 500.0, &p300, &p500, TensorMode::Auto).unwrap();
    println!(
        "delta a=0.5um 300/500 Auto: {:.6e} Pa, err {:.1e}, {:.2?}",
        dp,
        err,
        t0.elapsed()
    );

    let t0 = Instant::now();
    let (dpl, _) = delta_p_neq(a, 300.0, 500.0, &p300, &p500, TensorMode::LocalOnly).unwrap();
    println!(
        "delta a=0.5um 300/500 LocalOnly: {:.6e} Pa ({:+.2}% vs full), {:.2?}",
        dpl,
        100.0 * (dpl - dp) / dp,
        t0.elapsed()
    );

    let p77 = coated(0.2, 0.0, 77.0);
    let a2 = 2.0e-6;
    let t0 = Instant::now();
    let nb = p_neq(a2, 300.0, 77.0, &p300, &p77, TensorMode::Auto).unwrap();
    println!(
        "p_neq a=2um 300/77 Auto: qeq {:.6e}, delta {:.6e}, total {:.6e} Pa, {} terms, {:.2?}",
        nb.p_qeq,
        nb.delta_p_neq,
        nb.p_neq,
        nb.matsubara_terms,
        t0.elapsed()
    );
}
