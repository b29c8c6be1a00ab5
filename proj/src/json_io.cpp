#include "ellhyp/json_io.hpp"

#include <cstdio>
#include <map>
#include <tuple>

#include "ellhyp/errors.hpp"

namespace ellhyp::json {

namespace {

const Json& member(const Json& j, const std::string& parent,
                   const std::string& key) {
  if (!j.is_object()) throw SchemaError(parent, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) {
    throw SchemaError(parent.empty() ? key : parent + "." + key,
                      "missing field");
  }
  return *it;
}

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

int int_from(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) throw SchemaError(field, "expected an integer");
  return j.get<int>();
}

std::vector<int> int_list_from(const Json& j, const std::string& field) {
  if (!j.is_array()) throw SchemaError(field, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(int_from(j[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const ScaledComplex& z) {
  Json j;
  j["mantissa"] = to_json(z.mantissa());
  j["exp2"] = z.exp2();
  return j;
}

Json to_json(const KernelSpec& k) {
  Json j;
  j["variant"] = std::string(to_string(k.variant()));
  if (k.variant() == KernelVariant::Elliptic) {
    j["omega1"] = to_json(k.omega1());
    j["omega2"] = to_json(k.omega2());
  }
  j["gauge"] = {{"a", to_json(k.gauge().a)},
                {"b", to_json(k.gauge().b)},
                {"c", to_json(k.gauge().c)}};
  j["delta"] = to_json(k.delta());
  return j;
}

Json to_json(const Termination& t) {
  Json j;
  if (t.mode == TerminationMode::A) {
    j["mode"] = "A";
    j["k"] = t.k;
    j["N"] = t.N;
  } else {
    j["mode"] = "B";
    j["alpha"] = std::vector<int>(t.alpha.parts().begin(), t.alpha.parts().end());
  }
  return j;
}

cplx complex_from(const Json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    throw SchemaError(field, "expected a complex number [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<cplx> complex_list_from(const Json& j, const std::string& field) {
  if (!j.is_array()) throw SchemaError(field, "expected an array of [re, im]");
  std::vector<cplx> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(complex_from(j[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

KernelSpec kernel_from(const Json& j, const std::string& field) {
  const Json& v = member(j, field, "variant");
  if (!v.is_string()) throw SchemaError(join(field, "variant"), "expected a string");
  const auto variant = parse_variant(v.get<std::string>());
  if (!variant) {
    throw SchemaError(join(field, "variant"),
                      "unknown variant '" + v.get<std::string>() + "'");
  }
  Gauge gauge;
  if (j.contains("gauge")) {
    const Json& g = j["gauge"];
    const std::string gf = join(field, "gauge");
    if (!g.is_object()) throw SchemaError(gf, "expected an object");
    if (g.contains("a")) gauge.a = complex_from(g["a"], join(gf, "a"));
    if (g.contains("b")) gauge.b = complex_from(g["b"], join(gf, "b"));
    if (g.contains("c")) gauge.c = complex_from(g["c"], join(gf, "c"));
  }
  const bool has_delta = j.contains("delta");
  const cplx delta =
      has_delta ? complex_from(j["delta"], join(field, "delta")) : cplx{};
  try {
    switch (*variant) {
      case KernelVariant::Rational:
        return has_delta ? KernelSpec::rational(gauge, delta)
                         : KernelSpec::rational(gauge);
      case KernelVariant::Trigonometric:
        return has_delta ? KernelSpec::trigonometric(gauge, delta)
                         : KernelSpec::trigonometric(gauge);
      case KernelVariant::Elliptic: {
        const cplx w1 = complex_from(member(j, field, "omega1"), join(field, "omega1"));
        const cplx w2 = complex_from(member(j, field, "omega2"), join(field, "omega2"));
        return has_delta ? KernelSpec::elliptic(w1, w2, gauge, delta)
                         : KernelSpec::elliptic(w1, w2, gauge);
      }
    }
  } catch (const InvalidKernel& e) {
    throw SchemaError(field, e.what());
  }
  throw SchemaError(join(field, "variant"), "unsupported");
}

Termination termination_from(const Json& j, const std::string& field) {
  const Json& mode = member(j, field, "mode");
  if (mode == "A") {
    return Termination::mode_a(int_from(member(j, field, "k"), join(field, "k")),
                               int_from(member(j, field, "N"), join(field, "N")));
  }
  if (mode == "B") {
    auto alpha = int_list_from(member(j, field, "alpha"), join(field, "alpha"));
    for (int a : alpha) {
      if (a < 0) throw SchemaError(join(field, "alpha"), "entries must be >= 0");
    }
    return Termination::mode_b(MultiIndex(std::move(alpha)));
  }
  throw SchemaError(join(field, "mode"), "expected \"A\" or \"B\"");
}

PhiParams phi_params_from(const Json& j) {
  PhiParams p;
  p.kernel = kernel_from(member(j, "", "kernel"));
  p.a = complex_list_from(member(j, "", "a"), "a");
  p.x = complex_list_from(member(j, "", "x"), "x");
  p.b = complex_list_from(member(j, "", "b"), "b");
  p.c = complex_list_from(member(j, "", "c"), "c");
  p.N = int_from(member(j, "", "N"), "N");
  return p;
}

EParams e_params_from(const Json& j) {
  EParams p;
  p.kernel = kernel_from(member(j, "", "kernel"));
  p.a = complex_list_from(member(j, "", "a"), "a");
  p.x = complex_list_from(member(j, "", "x"), "x");
  p.s = complex_from(member(j, "", "s"), "s");
  p.u = complex_list_from(member(j, "", "u"), "u");
  p.v = complex_list_from(member(j, "", "v"), "v");
  p.termination = termination_from(member(j, "", "termination"));
  return p;
}

BasicPhiParams basic_phi_params_from(const Json& j) {
  BasicPhiParams p;
  p.q = complex_from(member(j, "", "q"), "q");
  p.a = complex_list_from(member(j, "", "a"), "a");
  p.x = complex_list_from(member(j, "", "x"), "x");
  p.b = complex_list_from(member(j, "", "b"), "b");
  p.c = complex_list_from(member(j, "", "c"), "c");
  p.N = int_from(member(j, "", "N"), "N");
  return p;
}

WParams w_params_from(const Json& j) {
  WParams p;
  p.q = complex_from(member(j, "", "q"), "q");
  p.a = complex_list_from(member(j, "", "a"), "a");
  p.x = complex_list_from(member(j, "", "x"), "x");
  p.s = complex_from(member(j, "", "s"), "s");
  p.u = complex_list_from(member(j, "", "u"), "u");
  p.v = complex_list_from(member(j, "", "v"), "v");
  p.termination = termination_from(member(j, "", "termination"));
  return p;
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("<document>", e.what());
  }
}

Json report_to_json(const VerificationReport& r) {
  const ParameterDraw& d = r.draw;
  Json j;
  j["id"] = std::string(to_string(r.id));
  j["kernel"] = to_json(d.kernel);
  const SizeUse& use = identity_info(r.id).uses;
  Json sizes = Json::object();
  if (use.m) sizes["m"] = d.sizes.m;
  if (use.n) sizes["n"] = d.sizes.n;
  if (use.N) sizes["N"] = d.sizes.N;
  if (use.M) sizes["M"] = d.sizes.M;
  if (use.alpha && d.sizes.alpha) {
    sizes["alpha"] = std::vector<int>(d.sizes.alpha->parts().begin(),
                                      d.sizes.alpha->parts().end());
  }
  j["sizes"] = sizes;
  j["seed"] = d.seed;
  j["resamples"] = d.resamples;
  j["ill_conditioned"] = d.ill_conditioned;
  Json params = Json::object();
  for (const auto& p : d.params) {
    Json list = Json::array();
    for (cplx v : p.values) list.push_back(to_json(v));
    params[p.name] = list;
  }
  j["params"] = params;
  Json indices = Json::object();
  for (const auto& p : d.indices) indices[p.name] = p.values;
  j["indices"] = indices;
  Json dependent = Json::array();
  for (const auto& v : d.dependent) {
    dependent.push_back({{"label", v.label},
                         {"value", to_json(v.value)},
                         {"constraint", v.balance ? "balance" : "termination"}});
  }
  j["dependent"] = dependent;
  j["balance_residual"] = d.balance_residual;
  j["balance_broken"] = d.balance_broken;
  j["lhs"] = to_json(r.lhs);
  j["rhs"] = to_json(r.rhs);
  j["rel_err"] = r.rel_err;
  j["tolerance"] = r.tolerance;
  j["cancellation"] = r.cancellation;
  j["pass"] = r.pass();
  j["outcome"] = std::string(to_string(r.outcome));
  j["note"] = r.note;
  return j;
}

std::string reports_jsonl(const std::vector<VerificationReport>& reports) {
  std::string out;
  for (const auto& r : reports) {
    out += report_to_json(r).dump();
    out += '\n';
  }
  return out;
}

std::string aggregate_csv(const std::vector<VerificationReport>& reports) {
  using Key = std::tuple<IdentityId, KernelVariant, int, int, int>;
  struct Row {
    int trials = 0;
    int passes = 0;
    double max_rel_err = 0.0;
    double wall = 0.0;
  };
  std::vector<Key> order;
  std::map<Key, Row> rows;
  for (const auto& r : reports) {
    const Key key{r.id, r.draw.kernel.variant(), r.draw.sizes.m,
                  r.draw.sizes.n, r.draw.sizes.N};
    auto [it, fresh] = rows.try_emplace(key);
    if (fresh) order.push_back(key);
    Row& row = it->second;
    ++row.trials;
    if (r.pass()) ++row.passes;
    row.max_rel_err = std::max(row.max_rel_err, r.rel_err);
    row.wall += r.wall_time;
  }
  std::string out = "id,kernel,m,n,N,trials,passes,max_rel_err,mean_wall_time\n";
  for (const Key& key : order) {
    const Row& row = rows[key];
    out += std::string(to_string(std::get<0>(key))) + ',' +
           std::string(to_string(std::get<1>(key))) + ',' +
           std::to_string(std::get<2>(key)) + ',' +
           std::to_string(std::get<3>(key)) + ',' +
           std::to_string(std::get<4>(key)) + ',' + std::to_string(row.trials) +
           ',' + std::to_string(row.passes) + ',' +
           fmt("%.3e", row.max_rel_err) + ',' +
           fmt("%.6f", row.wall / row.trials) + '\n';
  }
  return out;
}

}  // namespace ellhyp::json
