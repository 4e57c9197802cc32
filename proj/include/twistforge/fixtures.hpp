#pragma once

#include <string_view>

namespace twistforge::fixtures {

// Copies of fixtures/x7_y3z4_z7.tfs and fixtures/quartic_trivial.tfs so selftest needs no files.
inline constexpr std::string_view kGenusSix = R"tfs(# Smooth genus 6 curve birational to x^7 - y^3 z^4 - z^7 = 0.
# Canonical model in P^5 with w = (z^3 : x z^2 : x^2 z : y z^2 : x^3 : x y z).

[CURVE]
name x^7 - y^3*z^4 - z^7
genus 6
conductor 21
param 3 m
param 7 n

[GALOIS]
# K = k(zeta_21) with [K:k] = 12; z^7 is zeta_3 and z^3 is zeta_7
index 12
gens 8 10

[AUTGENS]
r: diag z^7, z^7, z^7, z^14, z^7, z^14
s: diag z^3, z^6, z^9, z^3, z^12, z^6

[IDEAL]
f1: w1*w6 - w2*w4
f2: w2^2 - w1*w3
f3: w2*w3 - w1*w5
f4: w2*w5 - w3^2
f5: w2*w6 - w3*w4
f6: w3*w6 - w4*w5
f7: w4^3 - w3^2*w5 + w1^3
f8: w5^3 - w4*w6^2 - w1*w2^2

[LABELS]
# small-group identifiers keyed by group fingerprint
order=1;orders=1:1;ab=1;center=1;derived=1 = <1,1>
order=3;orders=1:1,3:2;ab=3;center=3;derived=1 = <3,1>
order=7;orders=1:1,7:6;ab=7;center=7;derived=1 = <7,1>
order=21;orders=1:1,3:2,7:6,21:12;ab=21;center=21;derived=1 = <21,2>
order=12;orders=1:1,2:3,3:2,6:6;ab=2x6;center=12;derived=1 = <12,5>
order=36;orders=1:1,2:7,3:8,6:20;ab=2x6;center=6;derived=3 = <36,12>
order=84;orders=1:1,2:15,3:14,6:42,7:6,14:6;ab=2x6;center=2;derived=7 = <84,7>
order=252;orders=1:1,2:31,3:44,6:140,7:6,14:18,21:12;ab=2x6;center=1;derived=21 = <252,26>
)tfs";

inline constexpr std::string_view kTrivialQuartic = R"tfs(# Plane quartic over Q, taken with trivial automorphism group.

[CURVE]
name plane quartic
genus 3
conductor 1

[GALOIS]
index 1

[IDEAL]
F: w1^4 + w1*w2^3 + w2*w3^3 + 2*w3^4 + w1^2*w2*w3
)tfs";

}  // namespace twistforge::fixtures
