//! Arithmetic in F_{2^8}: the chosen modulus, Frobenius, traces and the
//! roots of a polynomial.

use ihara::ff::{ExtField, FieldParams, UPoly};

fn show(roots: Vec<ihara::ff::Elem>) -> String {
    roots.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
}

fn main() {
    let f = ExtField::new(FieldParams::new(2, 1).unwrap(), 8).unwrap();
    println!("F_256 = F_2[z]/({:?})", f.modulus());

    let g = f.generator();
    let g_inv = f.inv(g).unwrap();
    println!("g = {g}, g^-1 = {g_inv}, g·g^-1 = {}", f.mul(g, g_inv));
    println!("Frobenius: g^2 = {}, Tr(g) = {}", f.frobenius(g), f.absolute_trace(g));

    let traceless = f.elements().filter(|&a| f.absolute_trace(a) == 0).count();
    println!("{traceless} of {} elements have trace 0", f.order());

    // y^2 + y + g: two roots exactly when Tr(g) = 0
    let poly = UPoly::new(vec![g, f.one(), f.one()]);
    println!("roots of y^2 + y + g: {}", show(poly.roots(&f)));
    let c = f.elements().find(|&a| f.absolute_trace(a) == 0 && !a.is_zero()).unwrap();
    let poly = UPoly::new(vec![c, f.one(), f.one()]);
    println!("roots of y^2 + y + {c}: {}", show(poly.roots(&f)));
}
