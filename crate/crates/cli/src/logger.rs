//! Minimal stderr logger controlled by the `SUBMOD_LOG` environment
//! variable: `error`, `warn` (default), `info`, or `debug`.

#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub enum Level {
    Error = 0,
    Warn = 1,
    Info = 2,
    Debug = 3,
}

pub fn level() -> Level {
    match std::env::var("SUBMOD_LOG").as_deref() {
        Ok("error") => Level::Error,
        Ok("info") => Level::Info,
        Ok("debug") => Level::Debug,
        _ => Level::Warn,
    }
}

pub fn log(at: Level, message: &str) {
    if at <= level() {
        let tag = match at {
            Level::Error => "error",
            Level::Warn => "warn",
            Level::Info => "info",
            Level::Debug => "debug",
        };
        eprintln!("[{tag}] {message}");
    }
}

macro_rules! info {
    ($($arg:tt)*) => { crate::logger::log(crate::logger::Level::Info, &format!($($arg)*)) };
}
macro_rules! warn_log {
    ($($arg:tt)*) => { crate::logger::log(crate::logger::Level::Warn, &format!($($arg)*)) };
}

pub(crate) use info;
pub(crate) use warn_log;
