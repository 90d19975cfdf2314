#![no_main]

use libfuzzer_sys::fuzz_target;
use qmzv::cli::parse::parse_index_literal;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(lit) = parse_index_literal(text) {
        // the canonical label parses back to the same literal
        let again = parse_index_literal(&lit.label()).expect("label reparses");
        assert_eq!(again, lit);
    }
});
