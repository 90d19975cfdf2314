#![no_main]

use libfuzzer_sys::fuzz_target;
use qmzv::stuffle::StuffleExpr;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(expr) = StuffleExpr::from_json(text) {
        let back = StuffleExpr::from_json(&expr.to_json()).expect("serialized form reparses");
        assert_eq!(back, expr);
    }
});
