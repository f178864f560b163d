#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use dconormal::conormal::AffineVariety;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit_code: i32,
}

/// CLI runs pinned by files under `tests/golden`.
pub const GOLDEN_CASES: &[Case] = &[
    Case { name: "nash_cone3", args: &["nash", "examples/cone3.var", "--chart", "0"], exit_code: 0 },
    Case { name: "conormal_umbrella", args: &["conormal", "examples/umbrella.var", "--d", "2", "--all-charts"], exit_code: 0 },
    Case { name: "conormal_line3_d2", args: &["conormal", "examples/line3.var", "--d", "2", "--all-charts"], exit_code: 0 },
    Case { name: "conormal_plane4_d3", args: &["conormal", "examples/plane4.var", "--d", "3", "--all-charts"], exit_code: 0 },
    Case {
        name: "nash_umbrella_transversality",
        args: &["nash", "examples/umbrella.var", "--all-charts", "--transversality", "--seed", "3"],
        exit_code: 0,
    },
    Case {
        name: "fiber_cone3_gaussian",
        args: &["fiber", "examples/cone3.var", "--d", "2", "--point", "3,4,5i", "--all-charts"],
        exit_code: 0,
    },
    Case { name: "fiber_cone3_origin", args: &["fiber", "examples/cone3.var", "--d", "2", "--point", "0,0,0", "--all-charts"], exit_code: 0 },
    Case {
        name: "check_integral_not_integral",
        args: &["check-integral", "examples/not_integral.zvar", "--n", "3", "--d", "1", "--chart", "0"],
        exit_code: 1,
    },
    Case { name: "check_integral_a_zero", args: &["check-integral", "examples/a_zero.zvar", "--n", "3", "--d", "1"], exit_code: 1 },
    Case { name: "characterize_cone_nash", args: &["characterize", "examples/cone_nash.zvar", "--n", "3", "--d", "2"], exit_code: 0 },
    Case {
        name: "characterize_origin_chart",
        args: &["characterize", "examples/origin_chart.zvar", "--n", "3", "--d", "2"],
        exit_code: 0,
    },
    Case {
        name: "whitney_a_umbrella",
        args: &["whitney-a", "examples/umbrella.var", "--y-axes", "3", "--curves", "20", "--seed", "1"],
        exit_code: 1,
    },
    Case { name: "whitney_a_saddle", args: &["whitney-a", "examples/saddle.var", "--y-axes", "1", "--curves", "20"], exit_code: 0 },
    Case {
        name: "whitney_w_umbrella",
        args: &["whitney-w", "examples/umbrella.var", "--y-axes", "3", "--curves", "4", "--seed", "2"],
        exit_code: 1,
    },
    Case { name: "whitney_w_saddle", args: &["whitney-w", "examples/saddle.var", "--y-axes", "1", "--curves", "4"], exit_code: 0 },
    Case {
        name: "delta_5_3_2",
        args: &["delta", "--n", "5", "--d", "3", "--t", "2", "--trials", "1000", "--seed", "7"],
        exit_code: 0,
    },
    Case { name: "polar_cone3", args: &["polar", "examples/cone3.var", "--ell", "2", "--k", "1"], exit_code: 0 },
    Case { name: "polar_plane4", args: &["polar", "examples/plane4.var", "--ell", "3", "--k", "1"], exit_code: 0 },
    Case { name: "error_unit_ideal", args: &["conormal", "tests/data/unit.var", "--d", "1"], exit_code: 2 },
    Case { name: "error_syntax", args: &["nash", "tests/data/bad_syntax.var"], exit_code: 2 },
];

pub fn manifest_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_path(name: &str) -> PathBuf {
    manifest_dir().join("tests/golden").join(format!("{name}.json"))
}

pub struct Run {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Runs the `dconormal` binary from the crate root with a clean cap environment.
pub fn run_bin(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dconormal"));
    cmd.current_dir(manifest_dir())
        .args(args)
        .env_remove("CONORMAL_MAX_DEGREE")
        .env_remove("CONORMAL_MAX_BASIS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
        code: out.status.code().unwrap_or(-1),
    }
}

pub fn corpus(file: &str) -> AffineVariety {
    let text = std::fs::read_to_string(manifest_dir().join("examples").join(file)).expect("corpus file");
    dconormal::cli::parse_variety(&text).expect("corpus parses")
}

/// Coordinate planes and singular surfaces used by the acceptance criteria.
pub const CORPUS: &[&str] = &["line3.var", "plane3.var", "plane4.var", "cone3.var", "umbrella.var"];
