// Model sources the parser must reject.

/// Malformed sources with the 1-based (line, column) of the offending token.
pub const MALFORMED: &[(&str, usize, usize)] = &[
    ("x + * y", 1, 5),
    ("", 1, 1),
    ("   ", 1, 4),
    ("x +", 1, 4),
    ("(x + y", 1, 7),
    ("x + y)", 1, 6),
    ("x y", 1, 3),
    ("2 3", 1, 3),
    ("x ^ y", 1, 5),
    ("x^2.5", 1, 3),
    ("x^", 1, 3),
    ("x^2^3", 1, 4),
    ("x $ y", 1, 3),
    ("()", 1, 2),
    ("a *\n  / b", 2, 3),
    ("a +\n\n  b c", 3, 5),
    ("x^99999999999", 1, 3),
    (".", 1, 1),
    ("sin(x)", 1, 4),
    ("_x", 1, 1),
];
