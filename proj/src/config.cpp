#include "trajgan/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "trajgan/error.hpp"

namespace trajgan {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

// One entry per tunable; parse and print closures keep the two directions
// next to each other so they cannot drift apart.
struct Field {
  std::string section;
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&)> parse;
  std::function<std::string(const ExperimentConfig&)> print;
};

template <typename Get>
Field int_field(std::string section, std::string key, Get get) {
  return {section, key,
          [get, key](ExperimentConfig& c, const std::string& v) {
            char* end = nullptr;
            const long value = std::strtol(v.c_str(), &end, 10);
            if (end == v.c_str() || *end != '\0') {
              throw ConfigError("bad integer for " + key + ": " + v);
            }
            get(c) = static_cast<std::remove_reference_t<decltype(get(c))>>(
                value);
          },
          [get](const ExperimentConfig& c) {
            return std::to_string(get(const_cast<ExperimentConfig&>(c)));
          }};
}

template <typename Get>
Field double_field(std::string section, std::string key, Get get) {
  return {section, key,
          [get](ExperimentConfig& c, const std::string& v) {
            char* end = nullptr;
            const double value = std::strtod(v.c_str(), &end);
            if (end == v.c_str() || *end != '\0' || !std::isfinite(value)) {
              throw ConfigError("bad number: " + v);
            }
            get(c) = value;
          },
          [get](const ExperimentConfig& c) {
            return format_double(get(const_cast<ExperimentConfig&>(c)));
          }};
}

template <typename Get>
Field bool_field(std::string section, std::string key, Get get) {
  return {section, key,
          [get, key](ExperimentConfig& c, const std::string& v) {
            if (v == "true") {
              get(c) = true;
            } else if (v == "false") {
              get(c) = false;
            } else {
              throw ConfigError("bad boolean for " + key + ": " + v);
            }
          },
          [get](const ExperimentConfig& c) {
            return get(const_cast<ExperimentConfig&>(c)) ? "true" : "false";
          }};
}

template <typename Get>
Field string_field(std::string section, std::string key, Get get) {
  return {section, key,
          [get](ExperimentConfig& c, const std::string& v) { get(c) = v; },
          [get](const ExperimentConfig& c) {
            return get(const_cast<ExperimentConfig&>(c));
          }};
}

std::vector<Field> make_fields() {
  std::vector<Field> f;
  f.push_back(int_field("scene", "t_obs",
                        [](ExperimentConfig& c) -> int& { return c.window.t_obs; }));
  f.push_back(int_field("scene", "t_pred", [](ExperimentConfig& c) -> int& {
    return c.window.t_pred;
  }));
  f.push_back(double_field("scene", "hz", [](ExperimentConfig& c) -> double& {
    return c.window.hz;
  }));

  f.push_back(int_field("model", "embed_dim",
                        [](ExperimentConfig& c) -> std::size_t& {
                          return c.dims.embed_dim;
                        }));
  f.push_back(int_field("model", "hidden_dim",
                        [](ExperimentConfig& c) -> std::size_t& {
                          return c.dims.hidden_dim;
                        }));
  f.push_back(int_field("model", "heads",
                        [](ExperimentConfig& c) -> std::size_t& {
                          return c.dims.heads;
                        }));
  f.push_back(int_field("model", "z_dim",
                        [](ExperimentConfig& c) -> std::size_t& {
                          return c.dims.z_dim;
                        }));

  f.push_back(int_field("target_points", "count",
                        [](ExperimentConfig& c) -> int& {
                          return c.sampler.count;
                        }));
  f.push_back(double_field("target_points", "decay",
                           [](ExperimentConfig& c) -> double& {
                             return c.dynamics_decay;
                           }));
  f.push_back(double_field("target_points", "radial_spread",
                           [](ExperimentConfig& c) -> double& {
                             return c.sampler.radial_spread;
                           }));
  f.push_back(double_field("target_points", "max_bearing_rad",
                           [](ExperimentConfig& c) -> double& {
                             return c.sampler.max_bearing_rad;
                           }));
  f.push_back(double_field("target_points", "crop_half_width",
                           [](ExperimentConfig& c) -> double& {
                             return c.sampler.crop_half_width;
                           }));
  f.push_back(double_field("target_points", "stationary_radius",
                           [](ExperimentConfig& c) -> double& {
                             return c.sampler.stationary_radius;
                           }));
  f.push_back(int_field("target_points", "max_attempts_per_point",
                        [](ExperimentConfig& c) -> int& {
                          return c.sampler.max_attempts_per_point;
                        }));

  f.push_back(int_field("train", "epochs", [](ExperimentConfig& c) -> int& {
    return c.epochs;
  }));
  f.push_back(double_field("train", "lr", [](ExperimentConfig& c) -> double& {
    return c.lr;
  }));
  f.push_back(int_field("train", "batch_size",
                        [](ExperimentConfig& c) -> int& {
                          return c.batch_size;
                        }));
  f.push_back(int_field("train", "plateau_window",
                        [](ExperimentConfig& c) -> long& {
                          return c.plateau_window;
                        }));
  f.push_back(double_field("train", "plateau_factor",
                           [](ExperimentConfig& c) -> double& {
                             return c.plateau_factor;
                           }));
  f.push_back(int_field("train", "eval_interval",
                        [](ExperimentConfig& c) -> long& {
                          return c.eval_interval;
                        }));
  f.push_back(bool_field("train", "class_balance",
                         [](ExperimentConfig& c) -> bool& {
                           return c.class_balance;
                         }));
  f.push_back(double_field("train", "val_fraction",
                           [](ExperimentConfig& c) -> double& {
                             return c.val_fraction;
                           }));

  f.push_back(double_field("loss", "lambda_gan",
                           [](ExperimentConfig& c) -> double& {
                             return c.loss_weights.gan;
                           }));
  f.push_back(double_field("loss", "lambda_ade",
                           [](ExperimentConfig& c) -> double& {
                             return c.loss_weights.ade;
                           }));
  f.push_back(double_field("loss", "lambda_fde",
                           [](ExperimentConfig& c) -> double& {
                             return c.loss_weights.fde;
                           }));

  f.push_back(bool_field("augment", "enabled",
                         [](ExperimentConfig& c) -> bool& {
                           return c.augment_enabled;
                         }));
  f.push_back(bool_field("augment", "rotate",
                         [](ExperimentConfig& c) -> bool& {
                           return c.augment.rotate;
                         }));
  f.push_back(bool_field("augment", "noise",
                         [](ExperimentConfig& c) -> bool& {
                           return c.augment.noise;
                         }));
  f.push_back(bool_field("augment", "drop", [](ExperimentConfig& c) -> bool& {
    return c.augment.drop;
  }));
  f.push_back(double_field("augment", "noise_sigma",
                           [](ExperimentConfig& c) -> double& {
                             return c.augment.noise_sigma;
                           }));
  f.push_back(double_field("augment", "drop_prob",
                           [](ExperimentConfig& c) -> double& {
                             return c.augment.drop_prob;
                           }));

  f.push_back(int_field("seeds", "train",
                        [](ExperimentConfig& c) -> std::uint64_t& {
                          return c.train_seed;
                        }));
  f.push_back(int_field("seeds", "eval",
                        [](ExperimentConfig& c) -> std::uint64_t& {
                          return c.eval_seed;
                        }));

  f.push_back(string_field("paths", "corpus_dir",
                           [](ExperimentConfig& c) -> std::string& {
                             return c.corpus_dir;
                           }));
  f.push_back(string_field("paths", "map_file",
                           [](ExperimentConfig& c) -> std::string& {
                             return c.map_file;
                           }));
  f.push_back(string_field("paths", "out_dir",
                           [](ExperimentConfig& c) -> std::string& {
                             return c.out_dir;
                           }));
  return f;
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = make_fields();
  return f;
}

}  // namespace

train::TrainConfig ExperimentConfig::train_config() const {
  train::TrainConfig t;
  t.epochs = epochs;
  t.lr = lr;
  t.batch_size = batch_size;
  t.scheduler = {plateau_factor, plateau_window};
  t.loss_weights = loss_weights;
  t.dims = dims;
  t.augment = augment;
  t.augment_enabled = augment_enabled;
  t.class_balance = class_balance;
  t.eval_interval = eval_interval;
  t.val_fraction = val_fraction;
  t.seed = train_seed;
  t.sampler = sampler;
  t.dynamics_decay = dynamics_decay;
  return t;
}

train::EvalConfig ExperimentConfig::eval_config() const {
  train::EvalConfig e;
  e.seed = eval_seed;
  e.sampler = sampler;
  e.dynamics_decay = dynamics_decay;
  return e;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  std::istringstream is(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    bool matched = false;
    for (const auto& field : fields()) {
      if (field.section == section && field.key == key) {
        field.parse(config, value);
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw ConfigError("unknown config key [" + section + "] " + key);
    }
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& config) {
  std::ostringstream os;
  std::string section;
  for (const auto& field : fields()) {
    if (field.section != section) {
      if (!section.empty()) os << '\n';
      section = field.section;
      os << '[' << section << "]\n";
    }
    os << field.key << " = " << field.print(config) << '\n';
  }
  return os.str();
}

void save_config(const std::string& path, const ExperimentConfig& config) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw DataError("cannot open config for writing: " + path);
  os << serialize_config(config);
  if (!os) throw DataError("write failed: " + path);
}

}  // namespace trajgan
