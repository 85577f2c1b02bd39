//! Runs every acceptance criterion and prints one line per criterion.
//!
//! Known-red criteria are reported as failures but do not fail the run.

use std::process::ExitCode;

use simlab_core::laws::CRITERIA;

fn main() -> ExitCode {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut unexpected = 0;
    for c in CRITERIA.iter() {
        if !filter.is_empty() && !filter.iter().any(|f| c.name.contains(f.as_str()) || *f == c.id.to_string()) {
            continue;
        }
        let outcome = c.run();
        println!("{outcome}");
        if !outcome.passed() {
            match c.known_red() {
                Some(why) if !outcome.holds => println!("     (known: {why})"),
                _ => unexpected += 1,
            }
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria failed");
        ExitCode::FAILURE
    }
}
