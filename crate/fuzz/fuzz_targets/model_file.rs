#![no_main]

use libfuzzer_sys::fuzz_target;
use quadham::model_file::parse_model_file;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        // must never panic; errors are the expected outcome for junk input
        let _ = parse_model_file(text);
    }
});
