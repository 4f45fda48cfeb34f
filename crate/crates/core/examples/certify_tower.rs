//! Certifies the F_2 and F_3 ramification plans and prints their bounds.

use ihara::cft::{certify_tower, PlanEntry, RamificationPlan};
use ihara::ff::FieldParams;
use ihara::report::render_rational;

fn plan(p: u32, entries: &[(u32, u64, u32)], t: u64) -> RamificationPlan {
    let entries = entries.iter().map(|&(degree, count, nu)| PlanEntry { degree, count, nu }).collect();
    RamificationPlan::new(FieldParams::new(p, 1).unwrap(), entries, t).unwrap()
}

fn main() {
    let cases = [
        ("F_2, genus 276", 276, plan(2, &[(5, 1, 2), (8, 27, 2), (10, 1, 2)], 160)),
        ("F_2, genus 343", 343, plan(2, &[(5, 2, 2), (6, 16, 2), (8, 15, 2), (10, 4, 2)], 192)),
        ("F_3, genus 601", 601, plan(3, &[(8, 46, 3)], 567)),
        ("F_3, genus 601", 601, plan(3, &[(5, 1, 3), (8, 43, 3), (9, 2, 3)], 567)),
        ("F_2, too many split places", 276, plan(2, &[(5, 1, 2), (8, 27, 2), (10, 1, 2)], 231)),
    ];
    for (label, genus, plan) in cases {
        let cert = certify_tower(genus, &plan).unwrap();
        println!("{label}: {plan}");
        println!("  d ≥ {}, r - d ≤ {}, margin {}", cert.d_lower, cert.rd_upper, cert.gs_margin);
        match (&cert.bound, &cert.bound_refined) {
            (Some(b), Some(r)) => println!("  A(q) ≥ {}\n  A(q) ≥ {}", render_rational(b), render_rational(r)),
            _ => println!("  not certified"),
        }
    }
}
