//! Command-line front end.

pub mod cache;
pub mod commands;
pub mod grammar;
pub mod report;

use std::ffi::OsString;

use clap::Parser;

use crate::cache::Cache;
use crate::commands::{CacheAction, Cli, Command};
use crate::report::{Report, Status};

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    /// 0 exact, 2 bounded with `--allow-bounds`, 1 otherwise.
    pub code: i32,
}

fn fail(msg: String) -> Outcome {
    Outcome { stdout: String::new(), stderr: msg, code: 1 }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                fail(text)
            };
        }
    };
    let cache = if cli.no_cache { None } else { Cache::locate(cli.cache_dir.as_deref()) };

    if let Command::Cache { action } = &cli.command {
        let Some(cache) = Cache::locate(cli.cache_dir.as_deref()) else {
            return fail("no cache directory (set --cache-dir or BWBFORGE_CACHE)\n".into());
        };
        return match action {
            CacheAction::Stats => match cache.stats() {
                Ok(s) => Outcome {
                    stdout: format!("dir={} entries={} bytes={}\n", s.dir, s.entries, s.bytes),
                    stderr: String::new(),
                    code: 0,
                },
                Err(e) => fail(format!("error: {e}\n")),
            },
            CacheAction::Clear => match cache.clear() {
                Ok(n) => Outcome { stdout: format!("removed {n} entries\n"), stderr: String::new(), code: 0 },
                Err(e) => fail(format!("error: {e}\n")),
            },
        };
    }

    let mut stderr = String::new();
    let request = match commands::request(&cli.command) {
        Ok(r) => r,
        Err(e) => return fail(format!("error: {e:#}\n")),
    };
    let cached: Option<Report> = match (&cache, &request) {
        (Some(c), Some(req)) => c.get(req),
        _ => None,
    };
    if cli.verbose > 0 {
        stderr.push_str(if cached.is_some() { "cache: hit\n" } else { "cache: miss\n" });
    }
    let report = match cached {
        Some(r) => r,
        None => match commands::execute(&cli.command) {
            Ok(r) => {
                if let (Some(c), Some(req)) = (&cache, &request) {
                    if let Err(e) = c.put(req, &r) {
                        stderr.push_str(&format!("warning: cache write failed: {e}\n"));
                    }
                }
                r
            }
            Err(e) => return fail(format!("error: {e:#}\n")),
        },
    };
    let code = match report.status {
        Status::Exact => 0,
        Status::Ambiguous if cli.allow_bounds => 2,
        Status::Ambiguous => {
            stderr.push_str("error: some values are only bounded (pass --allow-bounds to accept)\n");
            1
        }
    };
    Outcome { stdout: report.render(cli.format), stderr, code }
}
