#include "nsx/persist.hpp"

#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "nsx/errors.hpp"

namespace nsx {

namespace {

constexpr char kMagic[4] = {'N', 'S', 'X', 'F'};

enum class Kind : std::uint32_t { NSimplex = 1, Linear = 2, Lmds = 3 };

class Writer {
 public:
  template <class T>
  void put(T v) {
    const auto* p = reinterpret_cast<const char*>(&v);
    buf_.insert(buf_.end(), p, p + sizeof(T));
  }
  void bytes(const char* p, std::size_t n) { buf_.insert(buf_.end(), p, p + n); }
  void text(std::string_view s) {
    put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  // Row-major, preceded by its two sizes.
  template <class M>
  void matrix(const M& m) {
    put<std::uint64_t>(static_cast<std::uint64_t>(m.rows()));
    put<std::uint64_t>(static_cast<std::uint64_t>(m.cols()));
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) put<double>(m(i, j));
    }
  }
  void vector(const Vector& v) {
    put<std::uint64_t>(static_cast<std::uint64_t>(v.size()));
    for (Index i = 0; i < v.size(); ++i) put<double>(v[i]);
  }
  const std::vector<char>& data() const { return buf_; }

 private:
  std::vector<char> buf_;
};

class Reader {
 public:
  Reader(std::vector<char> buf, std::string origin) : buf_(std::move(buf)), origin_(std::move(origin)) {}

  template <class T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, buf_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string text() {
    const auto n = get<std::uint32_t>();
    need(n);
    std::string s(buf_.data() + pos_, n);
    pos_ += n;
    return s;
  }
  Index size() {
    const auto n = get<std::uint64_t>();
    // Bounded by what is left in the file (each entry takes 8 bytes).
    if (n > remaining()) fail("size field out of range");
    return static_cast<Index>(n);
  }
  Matrix matrix() {
    const Index r = size(), c = size();
    need(static_cast<std::size_t>(r) * static_cast<std::size_t>(c) * sizeof(double));
    Matrix m(r, c);
    for (Index i = 0; i < r; ++i) {
      for (Index j = 0; j < c; ++j) m(i, j) = get<double>();
    }
    return m;
  }
  Vector vector() {
    const Index n = size();
    need(static_cast<std::size_t>(n) * sizeof(double));
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = get<double>();
    return v;
  }
  void finish() const {
    if (pos_ != buf_.size()) fail("trailing bytes");
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError(origin_ + ": " + what + " at byte " + std::to_string(pos_));
  }

 private:
  std::size_t remaining() const { return buf_.size() - pos_; }
  void need(std::size_t n) const {
    if (remaining() < n) fail("truncated");
  }

  std::vector<char> buf_;
  std::string origin_;
  std::size_t pos_ = 0;
};

constexpr std::string_view kCoordinateSuffix = "-coordinates";

// Linear transforms consume explicit coordinates of the metric, recorded
// as e.g. "euclidean-coordinates".
void put_metric(Writer& w, const Metric& m, bool coordinates = false) {
  w.text(std::string(m.name()) + (coordinates ? std::string(kCoordinateSuffix) : std::string()));
  if (const Matrix* qf = m.qf_matrix()) w.matrix(*qf);
}

Metric get_metric(Reader& r, bool coordinates = false) {
  std::string name = r.text();
  if (coordinates) {
    if (!name.ends_with(kCoordinateSuffix)) r.fail("linear transform metric '" + name + "' lacks the coordinates suffix");
    name.resize(name.size() - kCoordinateSuffix.size());
  }
  if (name == "quadratic-form") return Metric::quadratic_form(r.matrix());
  try {
    return Metric::from_name(name);
  } catch (const InvalidArgument&) {
    r.fail("unknown metric '" + name + "'");
  }
}

RowMatrix to_rows(const Matrix& m) { return m; }

}  // namespace

void save_transform(const std::filesystem::path& path, const StoredTransform& t) {
  Writer w;
  w.bytes(kMagic, 4);
  w.put<std::uint32_t>(kFormatVersion);
  if (const auto* ns = std::get_if<NSimplexTransform>(&t)) {
    w.put<std::uint32_t>(static_cast<std::uint32_t>(Kind::NSimplex));
    put_metric(w, ns->metric());
    w.matrix(ns->references());
    w.matrix(ns->base().coords());
  } else if (const auto* lin = std::get_if<LinearReducer>(&t)) {
    w.put<std::uint32_t>(static_cast<std::uint32_t>(Kind::Linear));
    put_metric(w, lin->metric, true);
    w.matrix(lin->transform.matrix);
    w.vector(lin->transform.centering);
    w.vector(lin->transform.offset);
    w.put<double>(lin->transform.scale);
  } else {
    const auto& lm = std::get<LmdsTransform>(t);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(Kind::Lmds));
    put_metric(w, lm.metric);
    w.matrix(lm.landmarks);
    w.matrix(lm.landmark_embedding);
    w.vector(lm.mean_sq_landmark_dists);
    w.matrix(lm.pseudo_inverse_factor);
    w.put<std::uint32_t>(lm.rank_deficient ? 1u : 0u);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(w.data().data(), static_cast<std::streamsize>(w.data().size()));
  if (!out) throw FormatError("write failed: " + path.string());
}

StoredTransform load_transform(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader r(std::move(bytes), path.string());
  char magic[4];
  for (char& c : magic) c = r.get<char>();
  if (std::memcmp(magic, kMagic, 4) != 0) r.fail("not a transform file (bad magic)");
  const auto version = r.get<std::uint32_t>();
  if (version != kFormatVersion) r.fail("unsupported version " + std::to_string(version));
  const auto kind = static_cast<Kind>(r.get<std::uint32_t>());
  try {
    switch (kind) {
      case Kind::NSimplex: {
        Metric metric = get_metric(r);
        RowMatrix refs = to_rows(r.matrix());
        Matrix base = r.matrix();
        r.finish();
        return NSimplexTransform(std::move(metric), std::move(refs), BaseSimplex(std::move(base)));
      }
      case Kind::Linear: {
        LinearReducer lin{get_metric(r, true), {}};
        lin.transform.matrix = r.matrix();
        lin.transform.centering = r.vector();
        lin.transform.offset = r.vector();
        lin.transform.scale = r.get<double>();
        r.finish();
        lin.transform.validate();
        return lin;
      }
      case Kind::Lmds: {
        Metric metric = get_metric(r);
        RowMatrix landmarks = to_rows(r.matrix());
        RowMatrix emb = to_rows(r.matrix());
        Vector mean_sq = r.vector();
        Matrix pinv = r.matrix();
        const bool deficient = r.get<std::uint32_t>() != 0;
        r.finish();
        if (emb.rows() != landmarks.rows() || mean_sq.size() != landmarks.rows() ||
            pinv.rows() != emb.cols() || pinv.cols() != landmarks.rows()) {
          r.fail("inconsistent landmark sizes");
        }
        return LmdsTransform{std::move(landmarks), std::move(metric), std::move(emb), std::move(mean_sq),
                             std::move(pinv), deficient};
      }
    }
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(path.string() + ": invalid contents: " + e.what());
  }
  r.fail("unknown transform kind " + std::to_string(static_cast<std::uint32_t>(kind)));
}

RowMatrix apply_transform(const StoredTransform& t, const RowMatrix& objects) {
  if (input_dimension(t) != objects.cols()) {
    throw DimensionMismatch("transform expects " + std::to_string(input_dimension(t)) +
                            "-dimensional input, got " + std::to_string(objects.cols()));
  }
  if (const auto* ns = std::get_if<NSimplexTransform>(&t)) return ns->transform(objects);
  if (const auto* lin = std::get_if<LinearReducer>(&t)) {
    auto coords = lin->metric.coordinates(objects);
    if (!coords) throw InvalidArgument("linear transform stored with a metric lacking coordinates");
    return apply_linear(lin->transform, *coords);
  }
  return lmds_transform(std::get<LmdsTransform>(t), objects);
}

Index output_dimension(const StoredTransform& t) {
  if (const auto* ns = std::get_if<NSimplexTransform>(&t)) return ns->dimension();
  if (const auto* lin = std::get_if<LinearReducer>(&t)) return lin->transform.output_dimension();
  return std::get<LmdsTransform>(t).dimension();
}

Index input_dimension(const StoredTransform& t) {
  if (const auto* ns = std::get_if<NSimplexTransform>(&t)) return ns->input_dimension();
  if (const auto* lin = std::get_if<LinearReducer>(&t)) return lin->transform.input_dimension();
  return std::get<LmdsTransform>(t).landmarks.cols();
}

}  // namespace nsx
