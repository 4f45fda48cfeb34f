//! How places of the elliptic curve E split in the degree-32 cover k, read
//! off from the traces of the Artin–Schreier data.

use ihara::cli::Session;
use ihara::cover::{decompose_place, decomposition_histogram};
use ihara::curve::enumerate_places;

fn main() {
    let session = Session::load("f2_tower1").unwrap();
    let k = &session.workspace.covers["k"];
    let e = k.base();

    for place in enumerate_places(e, 4).unwrap() {
        match decompose_place(k, &place) {
            Ok(rec) => println!(
                "degree-4 place {:?}: Frobenius vector {:?}, above it {:?}",
                place.repr, rec.frobenius_vector, rec.places_above
            ),
            Err(err) => println!("degree-4 place {:?}: {err}", place.repr),
        }
    }

    for m in 1..=8 {
        let hist = decomposition_histogram(k, m).unwrap();
        println!("m = {m}: {hist:?}");
    }
}
