//! Problem setups shared by the criterion benchmarks.

use sldens::reference::ExactExample;
use sldens::Potential;

pub fn hydrogen() -> Potential {
    ExactExample::Hydrogen { ell: 1, a: 1.0 }.potential()
}

pub fn bessel_one() -> Potential {
    ExactExample::BesselInt { n: 1 }.potential()
}

pub fn barrier() -> Potential {
    Potential::barrier(1, 1.0)
}
