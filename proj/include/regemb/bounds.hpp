#pragma once

#include <optional>
#include <string>
#include <vector>

namespace regemb {

// Brackets are floors throughout, so floor((k-1)/2) = -1 at k = 0.
int floor_div(int a, int b);

// k + (n+1) l - 1, from counting dimensions of the affine span.
int lower_bound_count(int n, int k, int l);
// floor(k/2) n + floor((k-1)/2) + (n+1) l
int lower_bound_main(int n, int k, int l);
// (n+1) k + (2n+1) l - 1
int upper_bound_main(int n, int k, int l);
// (n+1) l for closed manifolds and k = 0; l = 0 throws InvalidParameter.
int lower_bound_closed(int n, int l);
// Boltyanski-Ryzhkov-Shashkin bound for k-regular maps of R^n:
// floor(k/2) n + floor((k+1)/2). k < 1 throws InvalidParameter.
int brs_bound(int n, int k);
// N_{k,l} of the line (k + 2l - 1) or of the circle (k + 2l for even k,
// k + 2l - 1 for odd k).
int exact_curve(int k, int l, bool closed);

struct ExactValue {
  int value = 0;
  std::string source;
};

struct BoundsResult {
  int n = 0;
  int k = 0;
  int l = 0;
  bool closed = false;
  int lower_count = 0;
  int lower_main = 0;
  std::optional<int> lower_closed;  // closed, k = 0, l >= 1
  int upper_main = 0;
  std::optional<int> brs_lower;  // l = 0, k >= 1; concerns k-regular maps only
  std::optional<ExactValue> exact;

  // Largest of lower_count, lower_main and lower_closed.
  int max_lower() const;
};

BoundsResult bounds_table(int n, int k, int l, bool closed);

// Every (n, k, l) with 1 <= n <= max_n, 0 <= k <= max_k, 0 <= l <= max_l and
// k + l >= 1, n fastest-varying last.
std::vector<BoundsResult> bounds_grid(int max_n, int max_k, int max_l, bool closed);

// Aligned text table, one row per result.
std::string format_bounds_table(const std::vector<BoundsResult>& rows);

}  // namespace regemb
