#![no_main]

use libfuzzer_sys::fuzz_target;
use qmzv::cli::parse::parse_q_list;
use qmzv::QParam;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(qs) = parse_q_list(text) {
        assert!(!qs.is_empty());
        for q in qs {
            QParam::with_tol(q, 1e-10).expect("parsed q is valid");
        }
    }
});
