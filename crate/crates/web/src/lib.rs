//! Browser bindings. Each export takes the same config text the command-line
//! tool reads and returns the same report, so the page and the CLI agree.

use superquant::cli::{self, config, Command, JobConfig, Overrides};
use wasm_bindgen::prelude::*;

fn parse(text: &str) -> Result<JobConfig, String> {
    JobConfig::parse(text).map_err(|e| e.to_string())
}

/// Root table of the `[algebra]` block.
pub fn roots_report(config_text: &str) -> Result<String, String> {
    let cfg = parse(config_text)?;
    cli::execute(Command::Roots, &cfg, &Overrides::default()).map(|a| a.report).map_err(|e| e.to_string())
}

/// SVG of the atlas slice with box radius `n`.
pub fn atlas_svg(config_text: &str, n: u32) -> Result<String, String> {
    let cfg = parse(config_text)?;
    let ovr = Overrides { box_n: Some(n), ..Default::default() };
    let art = cli::execute(Command::Atlas, &cfg, &ovr).map_err(|e| e.to_string())?;
    art.files
        .into_iter()
        .find(|(name, _)| name == "atlas.svg")
        .map(|(_, bytes)| String::from_utf8_lossy(&bytes).into_owned())
        .ok_or_else(|| "atlas produced no picture".to_string())
}

/// Reduction and multiplicity check at the weight `lambda` (`a, b, …`).
pub fn solve_report(config_text: &str, lambda: &str) -> Result<String, String> {
    let mut cfg = parse(config_text)?;
    let lam = config::parse_vector(lambda)?;
    cfg.lambda_hat = Some((lam, 0));
    let ovr = Overrides::default();
    let mut out = String::new();
    for cmd in [Command::Reduce, Command::Qr] {
        match cli::execute(cmd, &cfg, &ovr) {
            Ok(a) => out.push_str(&a.report),
            Err(e) => out.push_str(&format!("{}\terror\t{e}\n", cmd.name())),
        }
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn roots(config_text: &str) -> Result<String, JsValue> {
    roots_report(config_text).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn atlas(config_text: &str, n: u32) -> Result<String, JsValue> {
    atlas_svg(config_text, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn solve(config_text: &str, lambda: &str) -> Result<String, JsValue> {
    solve_report(config_text, lambda).map_err(|e| JsValue::from_str(&e))
}
