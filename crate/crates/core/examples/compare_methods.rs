use ihara::search::{compare_methods, MethodComparisonInput};

fn main() {
    let inputs = [(21, 20, 1, 81), (21, 21, 1, 85), (24, 24, 1, 97), (24, 24, 3, 99)];
    for (s, t, s_prime, t_size) in inputs {
        let c = compare_methods(MethodComparisonInput { s, l: 2, t, s_prime, t_size, p: 2 });
        println!("s = {s}, t = {t}, s' = {s_prime}, |T| = {t_size}");
        println!("  usual: d ≥ {:>3}, r - d ≤ {:>3}, infinite: {}", c.usual.d_lower, c.usual.rd_upper, c.usual.infinite);
        println!("  ours:  d ≥ {:>3}, r - d ≤ {:>3}, infinite: {}", c.ours.d_lower, c.ours.rd_upper, c.ours.infinite);
    }
}
