#include "warplda/matrix.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "warplda/error.hpp"
#include "warplda/io.hpp"

namespace warplda {

namespace detail {

void run_workers(std::uint32_t workers, const std::function<void(std::uint32_t)>& body) {
  if (workers <= 1) {
    body(0);
    return;
  }
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  for (std::uint32_t w = 0; w < workers; ++w) threads.emplace_back(body, w);
}

void rethrow_first(bool by_row, const std::vector<SweepFailure>& failures) {
  const SweepFailure* first = nullptr;
  for (const auto& f : failures) {
    if (f.failed && (!first || f.index < first->index)) first = &f;
  }
  if (first) throw VisitError(by_row, first->index, first->what);
}

}  // namespace detail

std::uint32_t RowView::column_id(std::uint32_t i) const noexcept {
  auto it = std::upper_bound(col_begin_.begin(), col_begin_.end(), refs_[i]);
  return static_cast<std::uint32_t>(it - col_begin_.begin() - 1);
}

std::vector<std::uint64_t> TokenMatrix::row_lengths() const {
  std::vector<std::uint64_t> out(rows_);
  for (std::uint32_t d = 0; d < rows_; ++d) out[d] = row_length(d);
  return out;
}

std::vector<std::uint64_t> TokenMatrix::column_lengths() const {
  std::vector<std::uint64_t> out(cols_);
  for (std::uint32_t w = 0; w < cols_; ++w) out[w] = column_length(w);
  return out;
}

PartitionPlan TokenMatrix::single_worker() const {
  PartitionPlan plan;
  plan.worker_count = 1;
  plan.row_owner.assign(rows_, 0);
  plan.column_owner.assign(cols_, 0);
  plan.rows_of.assign(1, std::vector<std::uint32_t>(rows_));
  plan.columns_of.assign(1, std::vector<std::uint32_t>(cols_));
  std::iota(plan.rows_of[0].begin(), plan.rows_of[0].end(), 0u);
  std::iota(plan.columns_of[0].begin(), plan.columns_of[0].end(), 0u);
  return plan;
}

void TokenMatrix::build_row_index() {
  row_begin_.assign(rows_ + 1, 0);
  for (auto r : row_ids_) ++row_begin_[r + 1];
  std::partial_sum(row_begin_.begin(), row_begin_.end(), row_begin_.begin());
  row_refs_.resize(row_ids_.size());
  std::vector<std::uint64_t> cursor(row_begin_.begin(), row_begin_.end() - 1);
  // Store order is column-major, so each row's refs come out in column order.
  for (std::uint64_t off = 0; off < row_ids_.size(); ++off) row_refs_[cursor[row_ids_[off]]++] = off;
}

TokenMatrixBuilder::TokenMatrixBuilder(std::uint32_t rows, std::uint32_t cols, std::uint32_t width)
    : rows_(rows), cols_(cols), width_(width) {
  if (width == 0) throw std::invalid_argument("entry payload width must be positive");
}

void TokenMatrixBuilder::reserve(std::uint64_t entries) {
  row_ids_.reserve(entries);
  col_ids_.reserve(entries);
  data_.reserve(entries * width_);
}

void TokenMatrixBuilder::add_entry(std::uint32_t row, std::uint32_t col, std::span<const std::uint32_t> data) {
  if (row >= rows_) throw std::out_of_range("row " + std::to_string(row) + " >= " + std::to_string(rows_));
  if (col >= cols_) throw std::out_of_range("column " + std::to_string(col) + " >= " + std::to_string(cols_));
  if (data.size() != width_) throw std::out_of_range("payload width " + std::to_string(data.size()));
  row_ids_.push_back(row);
  col_ids_.push_back(col);
  data_.insert(data_.end(), data.begin(), data.end());
}

TokenMatrix TokenMatrixBuilder::finalize() && {
  const std::uint64_t n = row_ids_.size();

  // Two stable counting passes: by row, then by column.
  auto counting_order = [n](const std::vector<std::uint32_t>& key, std::uint32_t range,
                            const std::vector<std::uint64_t>& in) {
    std::vector<std::uint64_t> start(range + 1, 0);
    for (std::uint64_t i = 0; i < n; ++i) ++start[key[in[i]] + 1];
    std::partial_sum(start.begin(), start.end(), start.begin());
    std::vector<std::uint64_t> out(n);
    for (std::uint64_t i = 0; i < n; ++i) out[start[key[in[i]]]++] = in[i];
    return out;
  };
  std::vector<std::uint64_t> order(n);
  std::iota(order.begin(), order.end(), std::uint64_t{0});
  order = counting_order(row_ids_, rows_, order);
  order = counting_order(col_ids_, cols_, order);

  TokenMatrix m;
  m.rows_ = rows_;
  m.cols_ = cols_;
  m.width_ = width_;
  m.col_begin_.assign(cols_ + 1, 0);
  for (auto c : col_ids_) ++m.col_begin_[c + 1];
  std::partial_sum(m.col_begin_.begin(), m.col_begin_.end(), m.col_begin_.begin());
  m.row_ids_.resize(n);
  m.data_.resize(n * width_);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto src = order[i];
    m.row_ids_[i] = row_ids_[src];
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(src * width_), width_,
                m.data_.begin() + static_cast<std::ptrdiff_t>(i * width_));
  }
  m.build_row_index();

  row_ids_.clear();
  col_ids_.clear();
  data_.clear();
  return m;
}

namespace {
constexpr char kMatrixMagic[8] = {'W', 'L', 'D', 'A', 'M', 'T', 'X', '1'};
}

void write_matrix(const TokenMatrix& m, std::ostream& out) {
  out.write(kMatrixMagic, sizeof kMatrixMagic);
  io::put_u32(out, m.rows());
  io::put_u32(out, m.cols());
  io::put_u64(out, m.entry_total());
  io::put_u32(out, m.width() - 1);
  std::uint64_t off = 0;
  for (std::uint32_t w = 0; w < m.cols(); ++w) {
    const auto len = m.column_length(w);
    io::put_u64(out, len);
    for (std::uint64_t i = 0; i < len; ++i, ++off) {
      io::put_u32(out, m.entry_row(off));
      for (auto v : m.entry(off)) io::put_u32(out, v);
    }
  }
  if (!out) throw std::runtime_error("matrix dump: write failed");
}

TokenMatrix read_matrix(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || !std::equal(magic, magic + 8, kMatrixMagic)) {
    throw std::runtime_error("matrix dump: bad magic");
  }
  TokenMatrix m;
  m.rows_ = io::get_u32(in);
  m.cols_ = io::get_u32(in);
  const auto total = io::get_u64(in);
  m.width_ = io::get_u32(in) + 1;
  m.col_begin_.assign(m.cols_ + 1, 0);
  m.row_ids_.reserve(total);
  m.data_.reserve(total * m.width_);
  for (std::uint32_t w = 0; w < m.cols_; ++w) {
    const auto len = io::get_u64(in);
    m.col_begin_[w + 1] = m.col_begin_[w] + len;
    if (m.col_begin_[w + 1] > total) throw std::runtime_error("matrix dump: column sizes exceed T");
    std::uint32_t prev_row = 0;
    for (std::uint64_t i = 0; i < len; ++i) {
      const auto r = io::get_u32(in);
      if (r >= m.rows_ || r < prev_row) throw std::runtime_error("matrix dump: row ids out of range or unsorted");
      prev_row = r;
      m.row_ids_.push_back(r);
      for (std::uint32_t k = 0; k < m.width_; ++k) m.data_.push_back(io::get_u32(in));
    }
  }
  if (m.col_begin_[m.cols_] != total) throw std::runtime_error("matrix dump: entry count mismatch");
  m.build_row_index();
  return m;
}

}  // namespace warplda
