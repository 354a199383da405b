#pragma once

// Face counts and Stanley's local h-polynomial of a simplicial subdivision of
// a simplicial cone, computed straight from the face lattice.  The CLI uses
// this as a tripwire against the sheaf decomposition.

#include <map>
#include <vector>

#include "fanih/graded.hpp"
#include "fanih/subdivision.hpp"

namespace fanih {

// f[k] = number of cones with k rays among `cones` (lineality ignored).
inline std::vector<long> ray_count_vector(const Fan& f, const std::vector<int>& cones, int d) {
  std::vector<long> v(d + 1, 0);
  for (int c : cones) {
    int k = int(f.cone(c).rays.size());
    require(k <= d, ErrorKind::InvalidInput, "cone with too many rays");
    v[k]++;
  }
  return v;
}

// h(x) = sum_k f_k x^k (1-x)^(d-k)
inline std::vector<long> h_from_f(const std::vector<long>& f) {
  int d = int(f.size()) - 1;
  std::vector<long> h(d + 1, 0);
  for (int k = 0; k <= d; ++k) {
    // x^k (1-x)^(d-k)
    long binom = 1;
    for (int j = 0; j <= d - k; ++j) {
      h[k + j] += f[k] * binom * ((j % 2) ? -1 : 1);
      binom = binom * (d - k - j) / (j + 1);
    }
  }
  return h;
}

// l_V(x) = sum_{W subset V} (-1)^{|V - W|} h(Gamma_W, x) for a simplicial
// target cone sigma with ray set V; Gamma_W is the part of the source lying
// over the face W.
inline std::vector<long> stanley_local_h(const SubdivisionMap& pi, int sigma) {
  const Fan& t = *pi.target;
  require(t.simplicial(sigma), ErrorKind::SourceNotSimplicial, "local h needs a simplicial target cone");
  require(pi.source->simplicial(), ErrorKind::SourceNotSimplicial, "local h needs a simplicial source");
  int d = int(t.cone(sigma).rays.size());
  std::vector<long> ell(d + 1, 0);
  for (int w : t.cone(sigma).faces) {
    int k = int(t.cone(w).rays.size());
    std::vector<long> h = h_from_f(ray_count_vector(*pi.source, pi.fiber(w), k));
    int sign = ((d - k) % 2) ? -1 : 1;
    for (int i = 0; i <= k; ++i) ell[i] += sign * h[i];
  }
  return ell;
}

// Same data as a graded table: x^i sits in degree 2i.
inline GradedDims local_h_dims(const std::vector<long>& ell) {
  GradedDims g;
  for (size_t i = 0; i < ell.size(); ++i)
    if (ell[i]) g[2 * int(i)] = int(ell[i]);
  return g;
}

}  // namespace fanih
