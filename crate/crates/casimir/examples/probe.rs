use std::time::Instant;

use casimir::graphene::thermal::ThermalTable;

fn main() {
    // Reduced kinematics for u=1e-3, s=400 at a=0.5um, delta=0.2 eV.
    for (w, k) in [
        (9.9e-4, 1.3e-3),
        (9.2e-7, 1.22e-6),
        (9.9e-4, 6.5e-3),
        (9.9e-3, 6.5e-3),
    ] {
        let m = 0.5;
        let t0 = Instant::now();
        let n = 10;
        let mut table = None;
        for _ in 0..n {
            table = Some(ThermalTable::new(w, k, m));
        }
        let t_new = t0.elapsed() / n;
        let table = table.unwrap();
        let t0 = Instant::now();
        let mut out = None;
        for _ in 0..n {
            out = Some(table.integrate(0.0, 0.129));
        }
        let t_int = t0.elapsed() / n;
        println!("w={w:.2e} k={k:.2e}: new {t_new:?}, integrate {t_int:?}, ok={}",
            out.unwrap().is_ok());
    }
}
