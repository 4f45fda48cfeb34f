//! Builds a workspace from an inline configuration and prints the
//! certificate as JSON lines.

use ihara::cli::{cmd_certify, cmd_spectrum, Session};
use ihara::config::Workspace;

const CONFIG: &str = r#"
[field]
p = 2

[[curves]]
name = "E"
equation = "y^2 + y = x^3 + x"
genus = 1
infinity = [[1, 1]]

[[plans]]
name = "wide"
genus = 1
t = 5
entries = [[7, 20, 2]]
"#;

fn main() {
    let session = Session::new(Workspace::parse(CONFIG).unwrap());
    let spectrum = cmd_spectrum(&session, "E", Some(7)).unwrap();
    print!("{}", spectrum.render_text());
    let report = cmd_certify(&session, Some("wide")).unwrap();
    print!("{}", report.render_text());
    print!("{}", report.render_json());
}
