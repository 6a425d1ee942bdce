//! Fuzzes the matrix JSON decoder. Arbitrary bytes must either parse into a
//! matrix that survives a serialization round trip or come back as an error,
//! never panic.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qteleport::qstate::ComplexMatrix;

fuzz_target!(|data: &[u8]| {
    if let Ok(matrix) = ComplexMatrix::from_json_slice(data) {
        let encoded = matrix.to_json_string();
        let decoded = ComplexMatrix::from_json_str(&encoded).expect("round trip");
        assert_eq!(decoded.dim(), matrix.dim());
        assert!(matrix.max_abs_diff(&decoded) == 0.0);
    }
});
