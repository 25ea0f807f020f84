#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace volcone::cli {

/// Bad or missing command-line input; exits with the usage code.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every option of every subcommand; unused fields keep their defaults.
struct Params {
  std::string geom;
  std::string cls;
  std::string alpha;
  std::string beta;
  std::string t0 = "0";
  std::string t1 = "1";
  std::size_t steps = 10;

  std::string toric;
  std::string coeffs;
  std::size_t m = 100;

  std::string fn = "vol";
  std::string exponent;
  std::string box;
  std::size_t samples = 1000;
  std::string d1;
  std::string d2;
  std::string step = "1/100";
  std::string bound;
  std::string radius = "1/4";
  std::vector<std::string> dirs;

  std::string center;
  std::string eps = "1/2";
  std::string basis;
  std::string sup;
  std::size_t sup_samples = 4000;
  std::size_t pairs = 10000;
  std::size_t chain = 1000;
  std::string cone_box;

  std::string base = "p1";
  std::string a = "1";
  std::string d = "0";
  std::string e = "0";
  std::string t;
  bool minus = false;
  std::string kappa;
  std::string classes;

  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// What a command produced, before formatting.
struct Output {
  nlohmann::json result = nlohmann::json::object();
  /// Key/value lines; an empty key prints the value alone.
  std::vector<std::pair<std::string, std::string>> summary;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  int exit_code = 0;
};

Output geom_list(const Params& p);
Output geom_show(const Params& p);
Output geom_check(const Params& p);
Output zariski(const Params& p);
Output vol(const Params& p);
Output grad(const Params& p);
Output profile(const Params& p);
Output chambers(const Params& p);
Output oracle_count(const Params& p);
Output oracle_volume(const Params& p);
Output probe_concavity(const Params& p);
Output probe_kt(const Params& p);
Output probe_hessian(const Params& p);
Output probe_lipschitz(const Params& p);
Output probe_boundary(const Params& p);
Output lipschitz_certify(const Params& p);
Output lipschitz_fuzz(const Params& p);
Output wolfe_calibrate(const Params& p);
Output wolfe_vol(const Params& p);
Output wolfe_segment(const Params& p);

}  // namespace volcone::cli
