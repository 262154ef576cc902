#include "regemb/bounds.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "regemb/error.hpp"

namespace regemb {

namespace {

void require_nonempty(int n, int k, int l) {
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "manifold dimension must be at least 1");
  if (k < 0 || l < 0) throw Error(ErrorKind::InvalidParameter, "k and l must be nonnegative");
  if (k + l == 0) throw Error(ErrorKind::EmptyConfiguration, "k + l must be at least 1");
}

struct KnownValue {
  int n, k, l;
  bool closed;
  int value;
  const char* source;
};

// Values from the literature on totally skew embeddings.
constexpr KnownValue kKnownValues[] = {
    {2, 0, 2, false, 6, "Ghomi-Tabachnikov, totally skew embeddings of the plane: N(R^2) = 6"},
};

}  // namespace

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

int lower_bound_count(int n, int k, int l) {
  require_nonempty(n, k, l);
  return k + (n + 1) * l - 1;
}

int lower_bound_main(int n, int k, int l) {
  require_nonempty(n, k, l);
  return floor_div(k, 2) * n + floor_div(k - 1, 2) + (n + 1) * l;
}

int upper_bound_main(int n, int k, int l) {
  require_nonempty(n, k, l);
  return (n + 1) * k + (2 * n + 1) * l - 1;
}

int lower_bound_closed(int n, int l) {
  if (l < 1) throw Error(ErrorKind::InvalidParameter, "closed-manifold bound needs l >= 1");
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "manifold dimension must be at least 1");
  return (n + 1) * l;
}

int brs_bound(int n, int k) {
  if (k < 1) throw Error(ErrorKind::InvalidParameter, "k-regular bound needs k >= 1");
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "manifold dimension must be at least 1");
  return floor_div(k, 2) * n + floor_div(k + 1, 2);
}

int exact_curve(int k, int l, bool closed) {
  require_nonempty(1, k, l);
  const int open = k + 2 * l - 1;
  return (closed && k % 2 == 0) ? open + 1 : open;
}

int BoundsResult::max_lower() const {
  int m = std::max(lower_count, lower_main);
  if (lower_closed) m = std::max(m, *lower_closed);
  return m;
}

BoundsResult bounds_table(int n, int k, int l, bool closed) {
  BoundsResult r;
  r.n = n;
  r.k = k;
  r.l = l;
  r.closed = closed;
  r.lower_count = lower_bound_count(n, k, l);
  r.lower_main = lower_bound_main(n, k, l);
  r.upper_main = upper_bound_main(n, k, l);
  if (closed && k == 0 && l >= 1) r.lower_closed = lower_bound_closed(n, l);
  if (l == 0 && k >= 1) r.brs_lower = brs_bound(n, k);
  if (n == 1) {
    r.exact = ExactValue{exact_curve(k, l, closed), closed ? "exact value for the circle" : "exact value for the line"};
  } else {
    for (const auto& kv : kKnownValues) {
      if (kv.n == n && kv.k == k && kv.l == l && kv.closed == closed) r.exact = ExactValue{kv.value, kv.source};
    }
  }
  return r;
}

std::vector<BoundsResult> bounds_grid(int max_n, int max_k, int max_l, bool closed) {
  std::vector<BoundsResult> rows;
  for (int n = 1; n <= max_n; ++n) {
    for (int k = 0; k <= max_k; ++k) {
      for (int l = 0; l <= max_l; ++l) {
        if (k + l >= 1) rows.push_back(bounds_table(n, k, l, closed));
      }
    }
  }
  return rows;
}

std::string format_bounds_table(const std::vector<BoundsResult>& rows) {
  auto opt = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string("-"); };
  std::ostringstream out;
  out << std::setw(3) << "n" << std::setw(4) << "k" << std::setw(4) << "l" << std::setw(8) << "closed" << std::setw(8) << "count"
      << std::setw(7) << "main" << std::setw(9) << "closedlb" << std::setw(5) << "brs" << std::setw(7) << "upper" << std::setw(7)
      << "exact" << '\n';
  for (const auto& r : rows) {
    out << std::setw(3) << r.n << std::setw(4) << r.k << std::setw(4) << r.l << std::setw(8) << (r.closed ? "yes" : "no")
        << std::setw(8) << r.lower_count << std::setw(7) << r.lower_main << std::setw(9) << opt(r.lower_closed) << std::setw(5)
        << opt(r.brs_lower) << std::setw(7) << r.upper_main << std::setw(7)
        << (r.exact ? std::to_string(r.exact->value) : std::string("-")) << '\n';
  }
  return out.str();
}

}  // namespace regemb
