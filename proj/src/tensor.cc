#include "sdst/tensor.h"

#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "sdst/errors.h"

namespace sdst {

Tensor::Tensor(std::vector<int> shape) : shape_(std::move(shape)) {
  size_t n = 1;
  for (int d : shape_) {
    if (d < 0) throw ConfigError("negative tensor dimension");
    n *= static_cast<size_t>(d);
  }
  values_.assign(n, 0.0);
}

int Tensor::rows() const { return shape_.empty() ? 1 : shape_[0]; }

int Tensor::cols() const {
  int c = 1;
  for (size_t i = 1; i < shape_.size(); ++i) c *= shape_[i];
  return c;
}

void Tensor::set_zero() { std::fill(values_.begin(), values_.end(), 0.0); }

Gradients::Gradients(const ParameterStore &store) {
  for (ParamId id : store.ids()) grads_.emplace_back(store.value(id).shape());
}

void Gradients::zero() {
  for (Tensor &g : grads_) g.set_zero();
}

void Gradients::add(const Gradients &other) {
  for (size_t i = 0; i < grads_.size(); ++i) {
    grads_[i].vector() += other.grads_.at(i).vector();
  }
}

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t fnv1a(const std::string &s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::vector<double> init_values(uint64_t seed, const std::string &name,
                                const std::vector<int> &shape, Init init) {
  size_t n = 1;
  for (int d : shape) n *= static_cast<size_t>(d);
  std::vector<double> v(n, 0.0);
  if (init == Init::kZero) return v;

  double limit = 0.1;
  if (init == Init::kXavier) {
    const int fan_out = shape.empty() ? 1 : shape[0];
    int fan_in = 1;
    for (size_t i = 1; i < shape.size(); ++i) fan_in *= shape[i];
    limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  }
  uint64_t state = splitmix64(seed ^ splitmix64(fnv1a(name)));
  for (int d : shape) state = splitmix64(state ^ static_cast<uint64_t>(d));
  std::mt19937_64 rng(state);
  for (double &x : v) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
    x = (2.0 * u - 1.0) * limit;
  }
  return v;
}

ParamId ParameterStore::add(const std::string &name, std::vector<int> shape,
                            Init init) {
  if (index_.count(name)) throw ConfigError("duplicate parameter '" + name + "'");
  Tensor t(shape);
  const std::vector<double> v = init_values(seed_, name, shape, init);
  std::copy(v.begin(), v.end(), t.data());
  const int idx = static_cast<int>(values_.size());
  names_.push_back(name);
  values_.push_back(std::move(t));
  index_.emplace(name, idx);
  grads_ = Gradients(*this);
  return ParamId{idx};
}

std::optional<ParamId> ParameterStore::find(const std::string &name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return ParamId{it->second};
}

long ParameterStore::num_elements() const {
  long n = 0;
  for (const Tensor &t : values_) n += static_cast<long>(t.size());
  return n;
}

std::vector<ParamId> ParameterStore::ids() const {
  std::vector<ParamId> out(values_.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = ParamId{static_cast<int>(i)};
  return out;
}

nlohmann::ordered_json params_to_json(const ParameterStore &store,
                                      Precision precision) {
  nlohmann::ordered_json j;
  j["format_version"] = kParamFormatVersion;
  j["precision"] = precision == Precision::kFloat32 ? "float32" : "float64";
  j["parameters"] = nlohmann::ordered_json::array();
  for (ParamId id : store.ids()) {
    nlohmann::ordered_json p;
    p["name"] = store.name(id);
    p["shape"] = store.value(id).shape();
    auto values = nlohmann::ordered_json::array();
    for (double x : store.value(id).values()) {
      if (!std::isfinite(x)) {
        throw NumericalError("parameter '" + store.name(id) +
                             "' has a non-finite value");
      }
      if (precision == Precision::kFloat32) {
        values.push_back(static_cast<float>(x));
      } else {
        values.push_back(x);
      }
    }
    p["values"] = std::move(values);
    j["parameters"].push_back(std::move(p));
  }
  return j;
}

void params_from_json(const nlohmann::json &j, ParameterStore *store) {
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kParamFormatVersion) {
      throw DataError("unsupported parameter format_version " +
                      std::to_string(version));
    }
    const std::string precision = j.at("precision").get<std::string>();
    if (precision != "float32" && precision != "float64") {
      throw DataError("unknown parameter precision '" + precision + "'");
    }
    std::vector<bool> seen(store->size(), false);
    for (const auto &p : j.at("parameters")) {
      const std::string name = p.at("name").get<std::string>();
      auto id = store->find(name);
      if (!id) throw DataError("unexpected parameter '" + name + "'");
      Tensor &t = store->value(*id);
      if (p.at("shape").get<std::vector<int>>() != t.shape()) {
        throw DataError("shape mismatch for parameter '" + name + "'");
      }
      const auto &values = p.at("values");
      if (values.size() != t.size()) {
        throw DataError("value count mismatch for parameter '" + name + "'");
      }
      for (size_t i = 0; i < t.size(); ++i) {
        t.data()[i] = precision == "float32"
                          ? static_cast<double>(values[i].get<float>())
                          : values[i].get<double>();
      }
      seen[id->index] = true;
    }
    for (ParamId id : store->ids()) {
      if (!seen[id.index]) {
        throw DataError("parameter '" + store->name(id) + "' missing from file");
      }
    }
  } catch (const nlohmann::json::exception &e) {
    throw DataError(std::string("malformed parameter block: ") + e.what());
  }
}

}  // namespace sdst
