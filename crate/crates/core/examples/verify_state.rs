// Runs the `verify` and `bound` commands on a Werner state written to a
// temporary state file.

use bellcheck::cli::{run_cli, StateFile};
use bellcheck::qstate::DensityMatrix;

/// Returns the exit codes and the JSON written by both commands.
pub fn run_example() -> Vec<(i32, String)> {
    let rho = DensityMatrix::werner(0.9).expect("valid weight");
    let path = std::env::temp_dir().join(format!("bellcheck-example-{}.json", std::process::id()));
    std::fs::write(&path, serde_json::to_string_pretty(&StateFile::from_density(&rho)).unwrap()).unwrap();
    let state = path.to_string_lossy().into_owned();

    let mut results = Vec::new();
    for cmd in [vec!["verify", "--state", &state], vec!["bound", "--state", &state, "--restarts", "2"]] {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_cli(std::iter::once("bellcheck").chain(cmd), &mut out, &mut err);
        let text = String::from_utf8(out).unwrap();
        print!("{text}");
        eprint!("{}", String::from_utf8_lossy(&err));
        results.push((code, text));
    }
    let _ = std::fs::remove_file(&path);
    results
}

#[allow(dead_code)]
fn main() {
    run_example();
}
