//! Rump's polynomial at (77617, 33096) in single, double and exact arithmetic.

use rsum::generators::{rump_eval, rump_exact, RumpPrecision};

fn main() {
    let (x, y) = (77617.0, 33096.0);
    println!(
        "exact  {} = {}",
        rump_exact(x, y),
        rump_eval(x, y, RumpPrecision::Exact).unwrap()
    );
    println!(
        "double {:e}",
        rump_eval(x, y, RumpPrecision::Double).unwrap()
    );
    println!(
        "single {:e}",
        rump_eval(x, y, RumpPrecision::Single).unwrap()
    );
}
