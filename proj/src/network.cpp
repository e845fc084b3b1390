#include "tsnn/network.hpp"

#include <algorithm>
#include <cmath>

#include "tsnn/io_util.hpp"
#include "tsnn/kernels.hpp"
#include "tsnn/neuron.hpp"
#include "tsnn/parallel.hpp"
#include "tsnn/rng.hpp"

namespace tsnn {

std::size_t Network::weight_count() const {
  std::size_t n = 0;
  for (const Layer& l : layers) n += l.w.size();
  return n;
}

void Network::validate() const {
  if (layers.empty()) throw std::invalid_argument("network: no layers");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Layer& layer = layers[l];
    if (layer.fan_in < 1 || layer.fan_out < 1)
      throw std::invalid_argument("network: empty layer");
    if (layer.w.size() !=
        static_cast<std::size_t>(layer.fan_in) * layer.fan_out)
      throw std::invalid_argument("network: weight buffer shape mismatch");
    if (l > 0 && layers[l - 1].fan_out != layer.fan_in)
      throw std::invalid_argument("network: consecutive layer shapes do not compose");
    for (double wi : layer.w)
      if (!std::isfinite(wi))
        throw std::invalid_argument("network: non-finite weight");
  }
}

Layer init_weights(int fan_out, int fan_in, std::uint64_t seed,
                   InitScheme scheme, double beta, double margin) {
  if (fan_out < 1 || fan_in < 1)
    throw std::invalid_argument("init_weights: bad shape");
  if (scheme != InitScheme::kPositiveMean)
    throw std::invalid_argument("init_weights: unknown scheme");
  Layer layer{fan_out, fan_in,
              std::vector<double>(static_cast<std::size_t>(fan_out) * fan_in)};
  Rng rng(seed);
  const double c = 4.0 / fan_in;
  const double target = beta * (1.0 + margin);
  for (int j = 0; j < fan_out; ++j) {
    double sum = 0.0;
    for (int i = 0; i < fan_in; ++i) {
      const double u = rng.uniform(0.0, c);
      layer.at(j, i) = u;
      sum += u;
    }
    if (sum < target) {
      const double shift = (target - sum) / fan_in;
      for (int i = 0; i < fan_in; ++i) layer.at(j, i) += shift;
    }
  }
  return layer;
}

Network make_network(const NeuronModelConfig& cfg,
                     const std::vector<int>& widths, std::uint64_t seed,
                     double beta) {
  if (widths.size() < 2)
    throw std::invalid_argument("make_network: need input and output widths");
  Network net;
  net.cfg = cfg;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l)
    net.layers.push_back(init_weights(widths[l + 1], widths[l],
                                      derive_seed(seed, l),
                                      InitScheme::kPositiveMean, beta));
  net.validate();
  return net;
}

std::vector<double> encode_input(std::span<const double> features,
                                 const NeuronModelConfig& cfg) {
  std::vector<double> z(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    double d = features[i];
    if (d < -1e-9 || d > 1.0 + 1e-9)
      throw std::invalid_argument("encode_input: feature outside [0, 1]");
    d = std::clamp(d, 0.0, 1.0);
    z[i] = encode_value(2.0 * d, cfg);
  }
  return z;
}

namespace {

// Ascending stable sort of the finite entries of one row.
void sort_row(const double* z, int width, std::vector<int>& perm,
              std::vector<double>& z_sorted) {
  perm.clear();
  for (int i = 0; i < width; ++i)
    if (has_spike(z[i])) perm.push_back(i);
  std::sort(perm.begin(), perm.end(),
            [z](int a, int b) { return z[a] != z[b] ? z[a] < z[b] : a < b; });
  z_sorted.resize(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) z_sorted[k] = z[perm[k]];
}

}  // namespace

std::vector<double> forward(const Network& net, std::span<const double> batch,
                            int rows, ForwardRecord* record, int threads) {
  net.validate();
  net.cfg.validate();
  if (rows < 1) throw std::invalid_argument("forward: empty batch");
  if (batch.size() != static_cast<std::size_t>(rows) * net.input_width())
    throw std::invalid_argument("forward: batch width mismatch");

  const bool rational = net.cfg.variant == Variant::kNlifStep ||
                        net.cfg.variant == Variant::kNlifExp ||
                        net.cfg.variant == Variant::kLifStep;

  if (record) {
    record->revision = net.revision;
    record->batch = rows;
    record->input.assign(batch.begin(), batch.end());
    record->layers.assign(net.layers.size(), LayerRecord{});
  }

  std::vector<double> cur(batch.begin(), batch.end());
  std::vector<double> next;
  LayerRecord scratch;

  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const Layer& layer = net.layers[l];
    const int fan_in = layer.fan_in;
    const int fan_out = layer.fan_out;

    // Transposed weights: per sorted input, a block of neuron weights is
    // contiguous for the kernels.
    std::vector<double> w_t(layer.w.size());
    for (int j = 0; j < fan_out; ++j)
      for (int i = 0; i < fan_in; ++i)
        w_t[static_cast<std::size_t>(i) * fan_out + j] = layer.at(j, i);

    LayerRecord& lr = record ? record->layers[l] : scratch;
    lr.perm.assign(rows, {});
    lr.z_sorted.assign(rows, {});
    lr.out_value.assign(static_cast<std::size_t>(rows) * fan_out, kNoSpike);
    lr.out_denom.assign(static_cast<std::size_t>(rows) * fan_out, kNoSpike);
    lr.out_prefix.assign(static_cast<std::size_t>(rows) * fan_out, 0);

    const auto& backend = kernels::active();
    const double theta = rational ? net.cfg.rational_theta() : 0.0;
    const double bias = rational ? net.cfg.rational_bias() : 0.0;

    parallel_for(rows, threads, [&](int, int begin, int end) {
      for (int s = begin; s < end; ++s) {
        const double* zin = cur.data() + static_cast<std::size_t>(s) * fan_in;
        sort_row(zin, fan_in, lr.perm[s], lr.z_sorted[s]);
        const int nf = static_cast<int>(lr.perm[s].size());
        double* out = lr.out_value.data() + static_cast<std::size_t>(s) * fan_out;
        double* den = lr.out_denom.data() + static_cast<std::size_t>(s) * fan_out;
        int* pfx = lr.out_prefix.data() + static_cast<std::size_t>(s) * fan_out;
        if (nf == 0) continue;  // all inputs silent: outputs stay kNoSpike
        if (rational) {
          backend.forward_rational(lr.z_sorted[s].data(), lr.perm[s].data(),
                                   nf, w_t.data(), fan_out, theta, bias, out,
                                   den, pfx);
        } else {
          // Lambert-W / quadratic closed forms: per-neuron scalar path.
          std::span<const double> zrow(zin, static_cast<std::size_t>(fan_in));
          for (int j = 0; j < fan_out; ++j) {
            std::span<const double> wrow(
                layer.w.data() + static_cast<std::size_t>(j) * fan_in,
                static_cast<std::size_t>(fan_in));
            NeuronResult r = forward_neuron(zrow, wrow, net.cfg);
            out[j] = r.value;
            pfx[j] = r.causal.prefix_count;
          }
        }
      }
    });

    next = lr.out_value;
    std::swap(cur, next);
  }
  return cur;
}

std::vector<double> forward_sample(const Network& net,
                                   std::span<const double> input) {
  return forward(net, input, 1);
}

namespace {
constexpr char kCheckpointMagic[8] = {'T', 'S', 'N', 'N', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kCheckpointVersion = 1;
}  // namespace

void save_checkpoint(const Network& net, const std::string& manifest_text,
                     const std::string& path) {
  net.validate();
  ByteWriter wr;
  wr.put_bytes(kCheckpointMagic, sizeof kCheckpointMagic);
  wr.put<std::uint32_t>(kCheckpointVersion);
  wr.put<std::uint32_t>(static_cast<std::uint32_t>(net.cfg.variant));
  wr.put<double>(net.cfg.a);
  wr.put<double>(net.cfg.tau);
  wr.put<double>(net.cfg.b);
  wr.put<double>(net.cfg.v0);
  wr.put<double>(net.cfg.alpha);
  wr.put<std::uint32_t>(static_cast<std::uint32_t>(net.layers.size()));
  for (const Layer& l : net.layers) {
    wr.put<std::uint32_t>(static_cast<std::uint32_t>(l.fan_out));
    wr.put<std::uint32_t>(static_cast<std::uint32_t>(l.fan_in));
  }
  wr.put_string(manifest_text);
  for (const Layer& l : net.layers)
    wr.put_bytes(l.w.data(), l.w.size() * sizeof(double));
  wr.put<std::uint64_t>(fnv1a64(wr.buf));
  write_file(path, wr.buf);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  const std::string buf = read_file(path);
  if (buf.size() < sizeof kCheckpointMagic + 12)
    throw std::runtime_error("checkpoint too small: " + path);
  if (std::memcmp(buf.data(), kCheckpointMagic, sizeof kCheckpointMagic) != 0)
    throw std::runtime_error("not a checkpoint file: " + path);
  const std::string payload = buf.substr(0, buf.size() - 8);
  ByteReader tail(buf);
  tail.pos = buf.size() - 8;
  if (tail.get<std::uint64_t>() != fnv1a64(payload))
    throw std::runtime_error("checkpoint digest mismatch (corrupted): " + path);

  ByteReader rd(buf);
  rd.pos = sizeof kCheckpointMagic;
  if (rd.get<std::uint32_t>() != kCheckpointVersion)
    throw std::runtime_error("unsupported checkpoint version: " + path);

  LoadedCheckpoint out;
  out.net.cfg.variant = static_cast<Variant>(rd.get<std::uint32_t>());
  out.net.cfg.a = rd.get<double>();
  out.net.cfg.tau = rd.get<double>();
  out.net.cfg.b = rd.get<double>();
  out.net.cfg.v0 = rd.get<double>();
  out.net.cfg.alpha = rd.get<double>();
  const auto n_layers = rd.get<std::uint32_t>();
  out.net.layers.resize(n_layers);
  for (auto& l : out.net.layers) {
    l.fan_out = static_cast<int>(rd.get<std::uint32_t>());
    l.fan_in = static_cast<int>(rd.get<std::uint32_t>());
  }
  out.manifest_text = rd.get_string();
  for (auto& l : out.net.layers) {
    l.w.resize(static_cast<std::size_t>(l.fan_out) * l.fan_in);
    rd.get_bytes(l.w.data(), l.w.size() * sizeof(double));
  }
  out.net.cfg.validate();
  out.net.validate();
  return out;
}

}  // namespace tsnn
