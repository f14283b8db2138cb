#include "slantcheck/builtins.hpp"

#include "slantcheck/errors.hpp"
#include "slantcheck/runner.hpp"

namespace slantcheck {

namespace {

const std::string k_e1 = R"scn(slantcheck scenario v1
# Two anti-commuting complex structures on R^8, a two-parameter surface,
# and the slant behaviour of their weighted combinations.

[scenario]
name = e1

[ambient]
dim = 8
metric = euclidean

[structure J1]
preset = uu8

[structure J2]
preset = uv8_split

# Conjugated copies: same algebra, point-dependent coefficients.
[structure J1r]
base = J1
plane = 1 2
angle = x1

[structure J2r]
base = J2
plane = 1 2
angle = x1

[coefficients ab_diag]
a1 = sqrt(2)/2
a2 = sqrt(2)/2

[coefficients ab_35]
a1 = 3/5
a2 = 4/5

[coefficients trig]
a1 = cos(x1)
a2 = sin(x1)

[immersion F]
domain = 2
y1 = 2*x1
y2 = x1
y3 = x1^2
y4 = x1 + x2
y5 = x1 - x2
y6 = 2*x2
y7 = x2
y8 = x2^2

[grid surface]
axis x1 = -2 : 2 : 5
axis x2 = -2 : 2 : 5

[grid ambient_probe]
axis x1 = -1 : 1 : 2
axis x2 = -1 : 1 : 2
axis x3 = 0.5 : 0.5 : 1
axis x4 = -0.5 : -0.5 : 1
axis x5 = 1 : 1 : 1
axis x6 = -1 : -1 : 1
axis x7 = 0.25 : 0.25 : 1
axis x8 = 0.75 : 0.75 : 1

[field U]
v1 = x2
v2 = -x1
v3 = x4
v4 = -x3
v5 = x6
v6 = -x5
v7 = x8
v8 = -x7

[field W]
v1 = x1*x2
v2 = x3
v3 = 1
v4 = x1
v5 = x7
v6 = x2^2
v7 = 0
v8 = x5

[check j1_hermitian]
kind = almost_hermitian
structure = J1
grid = ambient_probe

[check j2_hermitian]
kind = almost_hermitian
structure = J2
grid = ambient_probe

[check j1r_hermitian]
kind = almost_hermitian
structure = J1r
grid = ambient_probe

[check pair_anticommute]
kind = anticommute
structures = J1, J2
grid = ambient_probe

[check rotated_anticommute]
kind = anticommute
structures = J1r, J2r
grid = ambient_probe

[check theta1_scan]
kind = slant_scan
immersion = F
structure = J1
grid = surface
require = slant

[check theta2_scan]
kind = slant_scan
immersion = F
structure = J2
grid = surface
require = slant

[check cross]
kind = cross_term
immersion = F
structures = J1, J2
grid = surface

[check family_diag]
kind = family_slant
immersion = F
structures = J1, J2
coefficients = ab_diag
grid = surface

[check family_35]
kind = family_slant
immersion = F
structures = J1, J2
coefficients = ab_35
grid = surface

[check family_trig]
kind = family_slant
immersion = F
structures = J1, J2
coefficients = trig
grid = surface

[check decomposition_rotated]
kind = decomposition
structures = J1r, J2r
a = 0.6
b = 0.8
xfield = U
yfield = W
grid = ambient_probe

[check nabla_trig]
kind = nabla_family
structures = J1, J2
coefficients = trig
xfield = U
yfield = W
grid = ambient_probe
)scn";
const std::string k_e2 = R"scn(slantcheck scenario v1
# A surface that is slant for one structure and anti-invariant for two
# others; weighted combinations then realize arccos(|a| cos theta1).  The
# default grid offsets the x2 axis to step around the invariant locus
# x1 = x2; the diagonal grid hits it on purpose to exercise exclusions.

[scenario]
name = e2

[ambient]
dim = 8
metric = euclidean

[structure J1]
preset = uu8

[structure J2]
preset = uv8_split

[structure J3]
preset = uv8_mixed

[coefficients ab]
a1 = 3/5
a2 = 4/5

[coefficients abc]
a1 = 0.6
a2 = 0.48
a3 = 0.64

[immersion F]
domain = 2
y1 = 2*x1
y2 = x1
y3 = x1^2
y4 = 1
y5 = 2*x2
y6 = x2
y7 = x2^2
y8 = 1

[grid offset]
axis x1 = -2 : 2 : 5
axis x2 = -1.75 : 2.25 : 5

[grid diagonal]
axis x1 = -2 : 2 : 5
axis x2 = -2 : 2 : 5

[check theta1_scan]
kind = slant_scan
immersion = F
structure = J1
grid = offset
require = slant

[check theta1_diagonal]
kind = slant_scan
immersion = F
structure = J1
grid = diagonal
require = slant

[check anti_j2]
kind = slant_scan
immersion = F
structure = J2
grid = offset
require = anti_invariant

[check anti_j3]
kind = slant_scan
immersion = F
structure = J3
grid = offset
require = anti_invariant

[check cross12]
kind = cross_term
immersion = F
structures = J1, J2
grid = offset

[check family_ab]
kind = family_slant
immersion = F
structures = J1, J2
coefficients = ab
grid = offset

[check family_abc]
kind = family_slant_k
immersion = F
structures = J1, J2, J3
coefficients = abc
grid = offset
)scn";
const std::string k_e3 = R"scn(slantcheck scenario v1
# A two-stage chain of slant immersions: the composite angle satisfies
# cos(theta_tilde) = cos(theta1) * cos(theta2) = (1/3) * (2/3) = 2/9.
# The first stage also carries the induced almost complex structure and
# its parallelism condition.

[scenario]
name = e3

[ambient]
dim = 8
metric = euclidean

[structure J1]
preset = uv8

[immersion F1]
domain = 4
y1 = x1 + x2
y2 = x1 - x2
y3 = x3 + x4
y4 = x3 - x4
y5 = x1
y6 = x2
y7 = x3
y8 = x4

[immersion F2]
domain = 2
y1 = x1
y2 = x1 + x2
y3 = x1 - x2
y4 = x2

[chain C]
immersions = F1, F2

[grid inner]
axis x1 = -1 : 1 : 3
axis x2 = -1 : 1 : 3

[grid mid]
axis x1 = -1 : 1 : 2
axis x2 = -1 : 1 : 2
axis x3 = -1 : 1 : 2
axis x4 = -1 : 1 : 2

[field X]
v1 = 1
v2 = 0
v3 = 0
v4 = 0

[field Y]
v1 = x2
v2 = x1
v3 = x4
v4 = x3

[check stage1_scan]
kind = slant_scan
immersion = F1
structure = J1
grid = mid
require = proper

[check induced]
kind = induced_structure
immersion = F1
structure = J1
grid = mid

[check kahler]
kind = kahler
immersion = F1
structure = J1
xfield = X
yfield = Y
grid = mid

[check chain]
kind = transitivity
chain = C
structure = J1
grid = inner
)scn";
const std::string k_e4 = R"scn(slantcheck scenario v1
# Anti-invariance travels down a chain: the inner immersion is
# anti-invariant inside the first stage, and the composite is then
# anti-invariant in the ambient space as well.

[scenario]
name = e4

[ambient]
dim = 8
metric = euclidean

[structure J1]
preset = uv8

[immersion F1]
domain = 4
y1 = x1 + x2
y2 = x1 - x2
y3 = x3 + x4
y4 = x3 - x4
y5 = x1
y6 = x2
y7 = x3
y8 = x4

[immersion F2]
domain = 2
y1 = 2*x1
y2 = x2
y3 = 2*x2
y4 = x1

# F1 composed with F2, written out for the direct ambient scan.
[immersion Fc]
domain = 2
y1 = 2*x1 + x2
y2 = 2*x1 - x2
y3 = x1 + 2*x2
y4 = 2*x2 - x1
y5 = 2*x1
y6 = x2
y7 = 2*x2
y8 = x1

[chain C]
immersions = F1, F2

[grid inner]
axis x1 = -1 : 1 : 3
axis x2 = -1 : 1 : 3

[check chain]
kind = transitivity
chain = C
structure = J1
grid = inner

[check composite_anti]
kind = slant_scan
immersion = Fc
structure = J1
grid = inner
require = anti_invariant
)scn";

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"e1", "e2", "e3", "e4"};
  return names;
}

bool is_builtin(const std::string& name) {
  for (const std::string& n : builtin_names())
    if (n == name) return true;
  return false;
}

const std::string& builtin_scenario_text(const std::string& name) {
  if (name == "e1") return k_e1;
  if (name == "e2") return k_e2;
  if (name == "e3") return k_e3;
  if (name == "e4") return k_e4;
  throw ValidationError("unknown example '" + name +
                        "'; available: e1, e2, e3, e4");
}

ScenarioConfig builtin_config(const std::string& name) {
  return parse_scenario(builtin_scenario_text(name), name);
}

Report run_builtin(const std::string& name) {
  return run_scenario(builtin_config(name));
}

}  // namespace slantcheck
