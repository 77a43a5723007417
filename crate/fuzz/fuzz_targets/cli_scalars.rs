#![no_main]

use libfuzzer_sys::fuzz_target;
use quadham::cli::{parse_complex, parse_range, parse_times};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_complex(text);
        let _ = parse_range(text);
        let _ = parse_times(text);
    }
});
