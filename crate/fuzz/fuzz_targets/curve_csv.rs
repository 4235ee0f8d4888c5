#![no_main]

use libfuzzer_sys::fuzz_target;
use wiretap_core::curve::ExponentCurve;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(curve) = ExponentCurve::from_csv_str(s) {
        let again = ExponentCurve::from_csv_str(&curve.to_csv()).expect("own output parses");
        assert_eq!(again.rates().len(), curve.rates().len());
        for (a, b) in again.points().iter().zip(curve.points()) {
            assert_eq!(a.rate.to_bits(), b.rate.to_bits());
            assert_eq!(a.exponent.to_bits(), b.exponent.to_bits());
        }
    }
});
