//! Every algorithm on every built-in series, with the error measured in ulp
//! against the exact sum.

use rsum::generators::{make_series, SeriesKind};
use rsum::oracle::{accumulate, error_in_ulps};
use rsum::{Algorithm, Precision};

fn main() {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(100_000);
    print!("{:<24}", "series (ulp error)");
    for a in Algorithm::ALL {
        print!("{:>25}", a.name());
    }
    println!();
    for kind in SeriesKind::ALL {
        let terms = make_series(kind.name(), n, Precision::Double)
            .unwrap()
            .terms::<f64>();
        let exact = accumulate(&terms).unwrap();
        print!("{:<24}", kind.name());
        for a in Algorithm::ALL {
            let sum = a.run(&terms).unwrap().sum;
            print!("{:>25.3}", error_in_ulps::<f64>(sum, &exact));
        }
        println!();
    }
}
