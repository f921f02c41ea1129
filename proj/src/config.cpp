#include "umx/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace umx {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("config error at " + where + ": " + what);
}

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) fail(where, "unknown key \"" + key + "\"");
  }
}

const json* get(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

std::string str_field(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

long int_field(const json& v, const std::string& where, long lo, long hi) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  const long x = v.get<long>();
  if (x < lo || x > hi)
    fail(where, "value " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "]");
  return x;
}

double num_field(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

bool bool_field(const json& v, const std::string& where) {
  if (!v.is_boolean()) fail(where, "expected a boolean");
  return v.get<bool>();
}

Rat rat_field(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Rat(v.get<long>());
  if (v.is_string()) {
    try {
      return rat_parse(v.get<std::string>());
    } catch (const std::exception& e) {
      fail(where, e.what());
    }
  }
  fail(where, "expected a rational as string or integer");
}

const std::set<std::string> kTopKeys = {
    "command", "algebra", "potential", "t",        "n_max",   "xi",   "k",    "g",
    "d_max",   "words",   "observables", "variable", "op",      "grid", "deltas",
    "ensemble", "seed",   "output"};

const std::set<std::string> kCommands = {
    "master-field", "tau-kg",      "free-energy", "hciz", "hurwitz",
    "mc-cumulants", "mc-validate", "clt",         "validate", "apply-op"};

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config error: top level must be an object");
  check_keys(root, "top level", kTopKeys);

  RunConfig c;
  if (const json* v = get(root, "command")) {
    c.command = str_field(*v, "command");
    if (!kCommands.count(c.command)) fail("command", "unknown command \"" + c.command + "\"");
  }

  if (const json* a = get(root, "algebra")) {
    if (!a->is_object()) fail("algebra", "expected an object");
    check_keys(*a, "algebra", {"unitaries", "generators", "sigma"});
    if (const json* v = get(*a, "unitaries"))
      c.unitaries = static_cast<int>(int_field(*v, "algebra.unitaries", 1, 16));
    if (const json* gs = get(*a, "generators")) {
      if (!gs->is_array()) fail("algebra.generators", "expected an array");
      std::map<std::string, std::string> adj_names;
      for (std::size_t i = 0; i < gs->size(); ++i) {
        const json& ge = (*gs)[i];
        const std::string where = "algebra.generators[" + std::to_string(i) + "]";
        if (!ge.is_object()) fail(where, "expected an object");
        check_keys(ge, where, {"name", "selfadjoint", "adjoint"});
        Generator gen;
        const json* nv = get(ge, "name");
        if (!nv) fail(where, "missing \"name\"");
        gen.name = str_field(*nv, where + ".name");
        if (const json* sv = get(ge, "selfadjoint"))
          gen.selfadjoint = bool_field(*sv, where + ".selfadjoint");
        if (const json* av = get(ge, "adjoint")) {
          gen.selfadjoint = false;
          adj_names[gen.name] = str_field(*av, where + ".adjoint");
        }
        c.generators.push_back(std::move(gen));
      }
      for (auto& gen : c.generators) {
        auto it = adj_names.find(gen.name);
        if (it == adj_names.end()) continue;
        int idx = -1;
        for (std::size_t j = 0; j < c.generators.size(); ++j)
          if (c.generators[j].name == it->second) idx = static_cast<int>(j);
        if (idx < 0) fail("algebra.generators", "adjoint \"" + it->second + "\" is not a generator");
        gen.adjoint = idx;
      }
    }
    if (const json* sg = get(*a, "sigma")) {
      if (!sg->is_object()) fail("algebra.sigma", "expected an object");
      check_keys(*sg, "algebra.sigma", {"type", "period", "patterns", "moments"});
      const json* tv = get(*sg, "type");
      if (!tv) fail("algebra.sigma", "missing \"type\"");
      c.sigma_type = str_field(*tv, "algebra.sigma.type");
      if (c.sigma_type == "unit") {
        if (get(*sg, "period") || get(*sg, "patterns") || get(*sg, "moments"))
          fail("algebra.sigma", "type \"unit\" takes no data");
      } else if (c.sigma_type == "diagonal") {
        const json* pv = get(*sg, "period");
        const json* pats = get(*sg, "patterns");
        if (!pv || !pats) fail("algebra.sigma", "type \"diagonal\" needs period and patterns");
        if (get(*sg, "moments")) fail("algebra.sigma", "type \"diagonal\" takes no moments");
        c.sigma_period = static_cast<int>(int_field(*pv, "algebra.sigma.period", 1, 4096));
        if (!pats->is_object()) fail("algebra.sigma.patterns", "expected an object");
        for (const auto& [name, arr] : pats->items()) {
          const std::string where = "algebra.sigma.patterns." + name;
          if (!arr.is_array()) fail(where, "expected an array");
          std::vector<Rat> row;
          for (const auto& e : arr) row.push_back(rat_field(e, where));
          c.sigma_patterns[name] = std::move(row);
        }
      } else if (c.sigma_type == "moments") {
        const json* mv = get(*sg, "moments");
        if (!mv) fail("algebra.sigma", "type \"moments\" needs moments");
        if (get(*sg, "period") || get(*sg, "patterns"))
          fail("algebra.sigma", "type \"moments\" takes only moments");
        if (!mv->is_object()) fail("algebra.sigma.moments", "expected an object");
        for (const auto& [name, rows] : mv->items()) {
          const std::string where = "algebra.sigma.moments." + name;
          if (!rows.is_array() || rows.empty()) fail(where, "expected a non-empty array of rows");
          std::vector<std::vector<Rat>> table;
          for (const auto& rowj : rows) {
            if (!rowj.is_array()) fail(where, "expected rows to be arrays");
            std::vector<Rat> row;
            for (const auto& e : rowj) row.push_back(rat_field(e, where));
            table.push_back(std::move(row));
          }
          c.sigma_moments[name] = std::move(table);
        }
      } else {
        fail("algebra.sigma.type", "unknown type \"" + c.sigma_type + "\"");
      }
    }
  }

  if (const json* v = get(root, "potential")) c.potential = str_field(*v, "potential");
  if (const json* v = get(root, "t")) c.t = num_field(*v, "t");
  if (const json* v = get(root, "n_max")) c.n_max = static_cast<int>(int_field(*v, "n_max", 0, 16));
  if (const json* v = get(root, "xi")) c.xi = static_cast<int>(int_field(*v, "xi", 2, 1 << 20));
  if (const json* v = get(root, "k")) c.k = static_cast<int>(int_field(*v, "k", 1, 8));
  if (const json* v = get(root, "g")) c.g = static_cast<int>(int_field(*v, "g", 0, 8));
  if (const json* v = get(root, "d_max")) c.d_max = static_cast<int>(int_field(*v, "d_max", 0, 16));
  if (const json* v = get(root, "words")) {
    if (!v->is_array()) fail("words", "expected an array of polynomial texts");
    for (const auto& e : *v) c.words.push_back(str_field(e, "words"));
  }
  if (const json* v = get(root, "observables")) {
    if (!v->is_array()) fail("observables", "expected an array of polynomial texts");
    for (const auto& e : *v) c.observables.push_back(str_field(e, "observables"));
  }
  if (const json* v = get(root, "variable"))
    c.variable = static_cast<int>(int_field(*v, "variable", 1, 16));
  if (const json* v = get(root, "op")) c.op = str_field(*v, "op");
  if (const json* v = get(root, "grid")) c.grid = static_cast<int>(int_field(*v, "grid", 1, 4096));
  if (const json* v = get(root, "deltas")) {
    if (!v->is_array()) fail("deltas", "expected an array of numbers");
    for (const auto& e : *v) c.deltas.push_back(num_field(e, "deltas"));
  }

  if (const json* en = get(root, "ensemble")) {
    if (!en->is_object()) fail("ensemble", "expected an object");
    check_keys(*en, "ensemble",
               {"sizes", "samples", "chains", "mode", "step", "burn_in", "thinning"});
    if (const json* v = get(*en, "sizes")) {
      if (!v->is_array() || v->empty()) fail("ensemble.sizes", "expected a non-empty array");
      c.ensemble.sizes.clear();
      for (const auto& e : *v)
        c.ensemble.sizes.push_back(static_cast<int>(int_field(e, "ensemble.sizes", 1, 4096)));
    }
    if (const json* v = get(*en, "samples"))
      c.ensemble.samples = int_field(*v, "ensemble.samples", 1, 100000000);
    if (const json* v = get(*en, "chains"))
      c.ensemble.chains = static_cast<int>(int_field(*v, "ensemble.chains", 1, 4096));
    if (const json* v = get(*en, "mode")) {
      c.ensemble.mode = str_field(*v, "ensemble.mode");
      if (c.ensemble.mode != "auto" && c.ensemble.mode != "iid" && c.ensemble.mode != "metropolis")
        fail("ensemble.mode", "expected auto, iid, or metropolis");
    }
    if (const json* v = get(*en, "step")) {
      c.ensemble.step = num_field(*v, "ensemble.step");
      if (!(c.ensemble.step > 0)) fail("ensemble.step", "must be positive");
    }
    if (const json* v = get(*en, "burn_in"))
      c.ensemble.burn_in = static_cast<int>(int_field(*v, "ensemble.burn_in", 0, 100000000));
    if (const json* v = get(*en, "thinning"))
      c.ensemble.thinning = static_cast<int>(int_field(*v, "ensemble.thinning", 1, 100000000));
  }

  if (const json* v = get(root, "seed")) {
    if (!v->is_number_unsigned() && !v->is_number_integer()) fail("seed", "expected an integer");
    c.seed = v->get<std::uint64_t>();
    c.seed_explicit = true;
  }
  if (const json* out = get(root, "output")) {
    if (!out->is_object()) fail("output", "expected an object");
    check_keys(*out, "output", {"csv", "json"});
    if (const json* v = get(*out, "csv")) c.out_csv = str_field(*v, "output.csv");
    if (const json* v = get(*out, "json")) c.out_json = str_field(*v, "output.json");
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string RunConfig::to_json_text() const {
  json root;
  root["command"] = command;
  json alg;
  alg["unitaries"] = unitaries;
  json gens = json::array();
  for (const Generator& g : generators) {
    json ge;
    ge["name"] = g.name;
    ge["selfadjoint"] = g.selfadjoint;
    if (!g.selfadjoint && g.adjoint >= 0)
      ge["adjoint"] = generators[static_cast<std::size_t>(g.adjoint)].name;
    gens.push_back(std::move(ge));
  }
  alg["generators"] = std::move(gens);
  json sg;
  sg["type"] = sigma_type;
  if (sigma_type == "diagonal") {
    sg["period"] = sigma_period;
    json pats = json::object();
    for (const auto& [name, row] : sigma_patterns) {
      json arr = json::array();
      for (const Rat& r : row) arr.push_back(rat_str(r));
      pats[name] = std::move(arr);
    }
    sg["patterns"] = std::move(pats);
  } else if (sigma_type == "moments") {
    json mm = json::object();
    for (const auto& [name, rows] : sigma_moments) {
      json tbl = json::array();
      for (const auto& row : rows) {
        json arr = json::array();
        for (const Rat& r : row) arr.push_back(rat_str(r));
        tbl.push_back(std::move(arr));
      }
      mm[name] = std::move(tbl);
    }
    sg["moments"] = std::move(mm);
  }
  alg["sigma"] = std::move(sg);
  root["algebra"] = std::move(alg);
  root["potential"] = potential;
  root["t"] = t;
  root["n_max"] = n_max;
  root["xi"] = xi;
  root["k"] = k;
  root["g"] = g;
  root["d_max"] = d_max;
  root["words"] = words;
  root["observables"] = observables;
  root["variable"] = variable;
  root["op"] = op;
  root["grid"] = grid;
  root["deltas"] = deltas;
  json en;
  en["sizes"] = ensemble.sizes;
  en["samples"] = ensemble.samples;
  en["chains"] = ensemble.chains;
  en["mode"] = ensemble.mode;
  en["step"] = ensemble.step;
  en["burn_in"] = ensemble.burn_in;
  en["thinning"] = ensemble.thinning;
  root["ensemble"] = std::move(en);
  root["seed"] = seed;
  json out = json::object();
  if (out_csv) out["csv"] = *out_csv;
  if (out_json) out["json"] = *out_json;
  root["output"] = std::move(out);
  return root.dump(2);
}

std::unique_ptr<Algebra> RunConfig::make_algebra() const {
  std::shared_ptr<const Sigma> sigma;
  try {
    if (sigma_type == "unit") {
      sigma = std::make_shared<UnitSigma>();
    } else if (sigma_type == "diagonal") {
      for (const Generator& g : generators)
        if (!sigma_patterns.count(g.name))
          throw std::invalid_argument("no pattern for generator " + g.name);
      sigma = std::make_shared<DiagonalSigma>(sigma_period, sigma_patterns);
    } else if (sigma_type == "moments") {
      int max_genus = -1;
      for (const Generator& g : generators) {
        auto it = sigma_moments.find(g.name);
        if (it == sigma_moments.end())
          throw std::invalid_argument("no moments for generator " + g.name);
        const int rows = static_cast<int>(it->second.size());
        max_genus = max_genus < 0 ? rows - 1 : std::min(max_genus, rows - 1);
      }
      if (max_genus < 0) max_genus = 0;
      sigma = std::make_shared<MomentSigma>(max_genus, sigma_moments);
    } else {
      throw std::invalid_argument("unknown sigma type " + sigma_type);
    }
    return std::make_unique<Algebra>(unitaries, generators, std::move(sigma));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config error in algebra: ") + e.what());
  }
}

std::map<std::string, std::vector<std::vector<Rat>>> RunConfig::moment_rows(int need_power) const {
  std::map<std::string, std::vector<std::vector<Rat>>> out;
  if (sigma_type == "moments") {
    out = sigma_moments;
  } else if (sigma_type == "diagonal") {
    for (const auto& [name, pat] : sigma_patterns) {
      std::vector<Rat> row;
      row.reserve(static_cast<std::size_t>(need_power) + 1);
      for (int p = 0; p <= need_power; ++p) {
        Rat acc(0);
        for (const Rat& v : pat) acc += rat_pow(v, static_cast<unsigned long>(p));
        row.push_back(acc / Rat(static_cast<long>(pat.size())));
      }
      out[name] = {std::move(row)};
    }
  } else {
    throw ConfigError("config error: this command needs diagonal or moment trace data");
  }
  for (const char* name : {"x", "y"})
    if (!out.count(name))
      throw ConfigError(std::string("config error: two-source commands need moments for \"") +
                        name + "\"");
  return out;
}

}  // namespace umx
