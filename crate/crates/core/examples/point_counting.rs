//! Place spectra and zeta functions of small curves over F_2 and F_3.

use ihara::curve::{spectrum_from_counts, zeta_check, CurveModel, InfiniteGroup};
use ihara::ff::FieldParams;

fn report(model: &CurveModel, dmax: usize) {
    let s = spectrum_from_counts(model, dmax).expect("countable");
    println!("{} (genus {}):", model.name(), model.genus());
    println!("  a_d = {:?}", s.places());
    println!("  N_n = {:?}", s.point_counts());
    let z = zeta_check(&s).expect("a genuine curve");
    println!("  L(T) coefficients {:?}, worst prediction error {}", z.l_coefficients, z.max_discrepancy());
}

fn main() {
    let f2 = FieldParams::new(2, 1).unwrap();
    let f3 = FieldParams::new(3, 1).unwrap();
    let one = vec![InfiniteGroup { degree: 1, count: 1 }];
    let two = vec![InfiniteGroup { degree: 1, count: 2 }];

    report(&CurveModel::parse("E", f2, "y^2 + y = x^3 + x", one.clone(), 1).unwrap(), 8);
    report(&CurveModel::parse("H", f2, "y^2 + (x^3 + x + 1) y = x^2 + x", two, 2).unwrap(), 6);
    report(&CurveModel::parse("E3", f3, "y^2 = x^3 - x + 1", one, 1).unwrap(), 5);
}
