//! Drive the command-line front end in-process and capture its JSON.

use std::collections::HashMap;

use cfdim::cli::run_with_env;

fn main() {
    let env: HashMap<String, String> = [("CFDIM_SEED".to_string(), "7".to_string())].into();
    for args in [
        vec!["cfdim", "expand", "7/10"],
        vec!["cfdim", "count", "D:l=5,n=5"],
        vec!["cfdim", "psi", "alog:2", "--predict"],
        vec!["cfdim", "config"],
    ] {
        let out = run_with_env(args.clone(), &env);
        print!("$ {}\n[{}] {}", args.join(" "), out.code, out.stdout);
    }
}
