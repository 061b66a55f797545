//! Pinned `--json` outputs. Set `CORRGRAPH_BLESS=1` to rewrite them.

mod common;

use common::{corrgraph, golden_cases, golden_dir};

#[test]
fn json_outputs_match_golden_files() {
    let bless = std::env::var_os("CORRGRAPH_BLESS").is_some();
    for (file, args) in golden_cases() {
        let output = corrgraph(&args);
        assert!(
            output.status.success(),
            "{file}: {}",
            String::from_utf8_lossy(&output.stderr)
        );
        let path = golden_dir().join(file);
        if bless {
            std::fs::write(&path, &output.stdout).unwrap();
            continue;
        }
        let expected = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(output.stdout == expected, "{file} differs from golden output");
    }
}
