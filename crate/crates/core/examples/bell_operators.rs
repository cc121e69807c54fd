// Builds the four Bell-CHSH operators for a pair of orthogonal settings and
// prints their spectra and expectations on |Φ+>.

use bellcheck::bell::{bell_family36, bell_family4, expectation, SettingsPair, Triad};
use bellcheck::linalg::{hermitian_eigen, HERMITIAN_TOL};
use bellcheck::qstate::{DensityMatrix, PureState};

/// Returns the four expectations on |Φ+> at the saturating settings.
pub fn run_example() -> [f64; 4] {
    let settings = SettingsPair::cirelson();
    let phi = DensityMatrix::from_pure(&PureState::phi_plus());
    let mut values = [0.0; 4];
    for (k, op) in bell_family4(&settings).iter().enumerate() {
        let spectrum = hermitian_eigen(&op.mat, HERMITIAN_TOL).expect("Hermitian").values;
        values[k] = expectation(op, &phi);
        println!("variant {}: spectrum {:?}, <B> = {:.6}", op.variant.index(), spectrum, values[k]);
    }
    let family = bell_family36(&Triad::axes(), &Triad::axes());
    let best = family.iter().map(|op| expectation(op, &phi).abs()).fold(0.0, f64::max);
    println!("{} operators from the axes triads, largest |<B>| on |Φ+> = {best:.6}", family.len());
    values
}

#[allow(dead_code)]
fn main() {
    run_example();
}
