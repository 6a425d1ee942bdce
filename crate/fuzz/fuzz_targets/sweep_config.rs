//! Fuzzes the sweep config parser. Any text input must produce either a
//! partial config or a line-tagged error, never panic.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qteleport_cli::config::parse_config_file;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_config_file(text);
    }
});
