#ifndef SDST_TENSOR_H_
#define SDST_TENSOR_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"

namespace sdst {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using MatrixMap = Eigen::Map<Matrix>;
using ConstMatrixMap = Eigen::Map<const Matrix>;
using VectorMap = Eigen::Map<Vector>;
using ConstVectorMap = Eigen::Map<const Vector>;

// Dense column-major tensor. Rank-2 tensors are viewed as matrices with
// shape[0] rows; rank-1 tensors as column vectors.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape);

  const std::vector<int> &shape() const { return shape_; }
  size_t size() const { return values_.size(); }
  double *data() { return values_.data(); }
  const double *data() const { return values_.data(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  int rows() const;
  int cols() const;
  MatrixMap matrix() { return MatrixMap(data(), rows(), cols()); }
  ConstMatrixMap matrix() const { return ConstMatrixMap(data(), rows(), cols()); }
  VectorMap vector() { return VectorMap(data(), static_cast<Eigen::Index>(size())); }
  ConstVectorMap vector() const {
    return ConstVectorMap(data(), static_cast<Eigen::Index>(size()));
  }

  void set_zero();
  bool operator==(const Tensor &) const = default;

 private:
  std::vector<int> shape_;
  std::vector<double> values_;
};

struct ParamId {
  int index = -1;
  bool valid() const { return index >= 0; }
  bool operator==(const ParamId &) const = default;
};

enum class Init {
  kZero,
  kXavier,     // U(-sqrt(6/(fan_in+fan_out)), +sqrt(6/(fan_in+fan_out)))
  kEmbedding,  // U(-0.1, 0.1)
};

class ParameterStore;

// Gradient tensors shaped like the parameters of a store.
class Gradients {
 public:
  Gradients() = default;
  explicit Gradients(const ParameterStore &store);

  Tensor &operator[](ParamId id) { return grads_.at(id.index); }
  const Tensor &operator[](ParamId id) const { return grads_.at(id.index); }
  int size() const { return static_cast<int>(grads_.size()); }
  void zero();
  void add(const Gradients &other);

 private:
  std::vector<Tensor> grads_;
};

// Named parameters in insertion order. Initial values are a pure function of
// (seed, name, shape).
class ParameterStore {
 public:
  explicit ParameterStore(uint64_t seed = 0) : seed_(seed) {}

  ParamId add(const std::string &name, std::vector<int> shape, Init init);

  int size() const { return static_cast<int>(values_.size()); }
  uint64_t seed() const { return seed_; }
  const std::string &name(ParamId id) const { return names_.at(id.index); }
  std::optional<ParamId> find(const std::string &name) const;
  Tensor &value(ParamId id) { return values_.at(id.index); }
  const Tensor &value(ParamId id) const { return values_.at(id.index); }
  Tensor &grad(ParamId id) { return grads_[id]; }
  Gradients &grads() { return grads_; }
  const Gradients &grads() const { return grads_; }
  void zero_grad() { grads_.zero(); }
  long num_elements() const;
  std::vector<ParamId> ids() const;

 private:
  uint64_t seed_;
  std::vector<std::string> names_;
  std::vector<Tensor> values_;
  std::unordered_map<std::string, int> index_;
  Gradients grads_;
};

// Deterministic initial values for a parameter.
std::vector<double> init_values(uint64_t seed, const std::string &name,
                                const std::vector<int> &shape, Init init);

enum class Precision { kFloat32, kFloat64 };

inline constexpr int kParamFormatVersion = 1;

// {format_version, precision, parameters: [{name, shape, values}]}.
nlohmann::ordered_json params_to_json(const ParameterStore &store,
                                      Precision precision);
// Overwrites values of `store` by name; every stored parameter must exist in
// the file with a matching shape.
void params_from_json(const nlohmann::json &j, ParameterStore *store);

}  // namespace sdst

#endif  // SDST_TENSOR_H_
