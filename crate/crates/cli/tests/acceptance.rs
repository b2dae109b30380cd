//! One PASS/FAIL line per acceptance criterion. Extra arguments select
//! criteria by number (`cargo test --test acceptance -- 4 9`); the
//! determinism criterion runs only with the full set.

use std::process::ExitCode;

use besov::suite::{combined_json, run_criterion, Context, Outcome, CRITERIA, DEFAULT_SEED};

fn main() -> ExitCode {
    let picked: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids: Vec<u32> = CRITERIA.iter().map(|c| c.0).filter(|id| picked.is_empty() || picked.contains(id)).collect();
    // the determinism check always repeats whatever ran first
    let cx = Context::new(DEFAULT_SEED);
    let mut first: Vec<Outcome> = Vec::new();
    let mut all_pass = true;
    for id in ids {
        let o = run_criterion(&cx, id).expect("known criterion");
        println!("{}", o.line());
        all_pass &= o.pass();
        first.push(o);
    }
    if picked.is_empty() || picked.contains(&11) {
        let cx2 = Context::new(DEFAULT_SEED);
        let again: Vec<Outcome> = first.iter().filter_map(|o| run_criterion(&cx2, o.id)).collect();
        let (a, b) = (combined_json(&first), combined_json(&again));
        let same = first.len() == again.len() && a == b;
        println!(
            "{} criterion 11: two runs of the full suite give byte-identical reports ({} bytes each{})",
            if same { "PASS" } else { "FAIL" },
            a.len(),
            if same { String::new() } else { format!(", second run {} bytes", b.len()) }
        );
        all_pass &= same;
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: at least one criterion failed");
        ExitCode::FAILURE
    }
}
