#include "odl1/serialize.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>

#include <json.hpp>

namespace odl1 {

namespace {

using nlohmann::json;

void write_container(const std::filesystem::path& path, const json& header,
                     const Mat& entries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("serialize: cannot open " + path.string());
  const std::string head = header.dump();
  const std::uint32_t len = static_cast<std::uint32_t>(head.size());
  out.write("ODL1", 4);
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(head.data(), static_cast<std::streamsize>(head.size()));
  for (Index j = 0; j < entries.cols(); ++j) {
    for (Index i = 0; i < entries.rows(); ++i) {
      const double re = entries(i, j).real();
      const double im = entries(i, j).imag();
      out.write(reinterpret_cast<const char*>(&re), sizeof(re));
      out.write(reinterpret_cast<const char*>(&im), sizeof(im));
    }
  }
  if (!out) throw Error("serialize: write failed for " + path.string());
}

std::pair<json, Mat> read_container(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("serialize: cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "ODL1")
    throw Error("serialize: bad magic in " + path.string());
  std::uint32_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  std::string head(len, '\0');
  in.read(head.data(), len);
  if (!in) throw Error("serialize: truncated header in " + path.string());
  json header = json::parse(head);
  const Index rows = header.at("rows").get<Index>();
  const Index cols = header.at("cols").get<Index>();
  Mat entries(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      double re = 0, im = 0;
      in.read(reinterpret_cast<char*>(&re), sizeof(re));
      in.read(reinterpret_cast<char*>(&im), sizeof(im));
      entries(i, j) = Scalar(re, im);
    }
  }
  if (!in) throw Error("serialize: truncated payload in " + path.string());
  return {std::move(header), std::move(entries)};
}

}  // namespace

void save_frame(const Frame& frame, const std::filesystem::path& path) {
  json header = {{"type", "frame"},
                 {"rows", frame.d.rows()},
                 {"cols", frame.d.cols()},
                 {"scalar", "complex128"},
                 {"lower_bound", frame.lower},
                 {"upper_bound", frame.upper}};
  write_container(path, header, frame.d);
}

Frame load_frame(const std::filesystem::path& path) {
  auto [header, entries] = read_container(path);
  if (header.at("type") != "frame")
    throw Error("load_frame: container is not a frame");
  Frame frame = make_frame(std::move(entries));
  // Bounds are recomputed by make_frame; the stored ones are a consistency check.
  const double stored_lower = header.at("lower_bound").get<double>();
  if (std::abs(stored_lower - frame.lower) > 1e-6 * (1.0 + frame.lower))
    throw Error("load_frame: stored bounds disagree with recomputed bounds");
  return frame;
}

void save_sensing_model(const SensingModel& model,
                        const std::filesystem::path& path) {
  json header = {{"type", "sensing"},
                 {"rows", model.phi.rows()},
                 {"cols", model.phi.cols()},
                 {"scalar", "complex128"},
                 {"kind", model.kind == SensingKind::Gaussian
                              ? "gaussian"
                              : "partial_dft_signflip"},
                 {"sigma", model.sigma},
                 {"epsilon", model.epsilon}};
  write_container(path, header, model.phi);
}

SensingModel load_sensing_model(const std::filesystem::path& path) {
  auto [header, entries] = read_container(path);
  if (header.at("type") != "sensing")
    throw Error("load_sensing_model: container is not a sensing model");
  SensingModel model;
  model.phi = std::move(entries);
  model.kind = header.at("kind") == "gaussian"
                   ? SensingKind::Gaussian
                   : SensingKind::PartialDftSignFlipped;
  model.sigma = header.at("sigma").get<double>();
  model.epsilon = header.at("epsilon").get<double>();
  return model;
}

std::string recovery_result_to_json(const RecoveryResult& result) {
  json doc;
  doc["outer_iterations_used"] = result.outer_iterations_used;
  doc["converged"] = result.converged;
  doc["residual_history"] = result.residual_history;
  if (result.error_history) doc["error_history"] = *result.error_history;
  json f = json::array();
  for (Index i = 0; i < result.f_hat.size(); ++i)
    f.push_back({result.f_hat[i].real(), result.f_hat[i].imag()});
  doc["f_hat"] = std::move(f);
  return doc.dump(2);
}

}  // namespace odl1
