//! Searches all ramification plans over the F_2 tower-2 field k and prints
//! the five best.

use ihara::cli::Session;
use ihara::report::render_rational;
use ihara::search::optimize;

fn main() {
    let session = Session::load("f2_tower2").unwrap();
    let search = session.workspace.search.as_ref().unwrap();
    let spectrum = session.spectrum(&search.over, search.dmax).unwrap();
    let space = session.workspace.search_space(spectrum).unwrap().with_top_n(5);

    let outcome = optimize(&space).unwrap();
    println!("{} candidates, {} certified", outcome.evaluated, outcome.certified);
    for (i, r) in outcome.ranked.iter().enumerate() {
        println!("{:>2}. {}  {}", i + 1, render_rational(r.bound_refined()), r.plan);
    }
}
