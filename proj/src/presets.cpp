#include "dirac/presets.hpp"

#include "dirac/parser.hpp"

namespace dirac {

namespace {

// Electric/magnetic first-order action; the curl pair of the field
// equations follows from it, the divergence conditions are auxiliary.
const char* kEbMaxwell = R"(# first-order E/B action
model eb-maxwell {
  field E rank 1 parity -;
  field B rank 1 parity +;
  density = 1/8 / pi * (
      B[i] * (1/c * dt(E[i]) - eps[i,j,k] * d[j](B[k]))
    - E[i] * (1/c * dt(B[i]) + eps[i,j,k] * d[j](E[k])) );
  auxiliary d[i](E[i]);
  auxiliary d[i](B[i]);
}
)";

// Rank-2 analogue with the curl acting through the first slot.
const char* kEbGravity = R"(# rank-2 E/B action
model eb-gravity {
  field E rank 2 parity -;
  field B rank 2 parity +;
  density =
      B[i,j] * (1/c * dt(E[i,j]) - eps[i,k,l] * d[k](B[l,j]))
    - E[i,j] * (1/c * dt(B[i,j]) + eps[i,k,l] * d[k](E[l,j]));
}
)";

// Standard potential formulation for comparison (unit normalization).
const char* kMaxwellA = R"(# potential formulation
model maxwell-a {
  field A0 rank 0 parity +;
  field A rank 1 parity -;
  density =
      1/2 * (dt(A[i]) + d[i](A0)) * (dt(A[i]) + d[i](A0))
    - 1/4 * (d[i](A[j]) - d[j](A[i])) * (d[i](A[j]) - d[j](A[i]));
}
)";

} // namespace

std::vector<std::string> preset_names() {
    return {"eb-maxwell", "eb-gravity", "maxwell-a"};
}

std::optional<std::string> preset_source(const std::string& name) {
    if (name == "eb-maxwell") return std::string(kEbMaxwell);
    if (name == "eb-gravity") return std::string(kEbGravity);
    if (name == "maxwell-a") return std::string(kMaxwellA);
    return std::nullopt;
}

LagrangianModel load_preset(const std::string& name) {
    auto src = preset_source(name);
    if (!src) throw Error("unknown preset: " + name);
    return parse_model(*src);
}

} // namespace dirac
