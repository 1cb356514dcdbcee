#include "flp/map/located_json.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include "flp/common/error.hpp"

namespace flp {

namespace {

struct LineTracker {
  int line = 1;
  int last_token_line = 1;
};

// Character iterator that keeps LineTracker in sync with how far the parser
// has read.
class CountingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  CountingIterator() = default;
  CountingIterator(const char* p, LineTracker* t) : p_(p), t_(t) {}

  reference operator*() const { return *p_; }
  CountingIterator& operator++() {
    const char c = *p_;
    if (c == '\n') {
      ++t_->line;
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      t_->last_token_line = t_->line;
    }
    ++p_;
    return *this;
  }
  CountingIterator operator++(int) {
    CountingIterator tmp = *this;
    ++*this;
    return tmp;
  }
  bool operator==(const CountingIterator& o) const { return p_ == o.p_; }
  bool operator!=(const CountingIterator& o) const { return p_ != o.p_; }

 private:
  const char* p_ = nullptr;
  LineTracker* t_ = nullptr;
};

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

class LineRecorder : public nlohmann::json_sax<nlohmann::json> {
 public:
  LineRecorder(const LineTracker& tracker, std::unordered_map<std::string, int>& lines)
      : tracker_(tracker), lines_(lines) {}

  bool null() override { return scalar(); }
  bool boolean(bool) override { return scalar(); }
  bool number_integer(number_integer_t) override { return scalar(); }
  bool number_unsigned(number_unsigned_t) override { return scalar(); }
  bool number_float(number_float_t, const string_t&) override { return scalar(); }
  bool string(string_t&) override { return scalar(); }
  bool binary(binary_t&) override { return scalar(); }

  bool start_object(std::size_t) override { return open(false); }
  bool start_array(std::size_t) override { return open(true); }
  bool key(string_t& k) override {
    frames_.back().key = escape_token(k);
    return true;
  }
  bool end_object() override { return close(); }
  bool end_array() override { return close(); }

  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override { return false; }

 private:
  struct Frame {
    bool array = false;
    std::size_t index = 0;
    std::string key;
  };

  std::string current_pointer() const {
    std::string p;
    for (const auto& f : frames_) {
      p += '/';
      p += f.array ? std::to_string(f.index) : f.key;
    }
    return p;
  }

  bool scalar() {
    lines_.emplace(current_pointer(), tracker_.last_token_line);
    advance();
    return true;
  }
  bool open(bool array) {
    lines_.emplace(current_pointer(), tracker_.last_token_line);
    frames_.push_back({array, 0, {}});
    return true;
  }
  bool close() {
    frames_.pop_back();
    advance();
    return true;
  }
  void advance() {
    if (!frames_.empty() && frames_.back().array) ++frames_.back().index;
  }

  const LineTracker& tracker_;
  std::unordered_map<std::string, int>& lines_;
  std::vector<Frame> frames_;
};

}  // namespace

LocatedJson LocatedJson::parse(std::string_view text, std::string source_name) {
  LocatedJson doc;
  doc.source_ = std::move(source_name);
  try {
    doc.root_ = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::ParseError, doc.source_ + ": " + e.what());
  }
  LineTracker tracker;
  LineRecorder recorder(tracker, doc.lines_);
  CountingIterator first(text.data(), &tracker);
  CountingIterator last(text.data() + text.size(), &tracker);
  nlohmann::json::sax_parse(first, last, &recorder);
  return doc;
}

LocatedJson LocatedJson::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

int LocatedJson::line_of(std::string_view pointer) const {
  std::string p(pointer);
  while (true) {
    if (auto it = lines_.find(p); it != lines_.end()) return it->second;
    if (p.empty()) return 1;
    p.erase(p.rfind('/'));
  }
}

std::string LocatedJson::describe(std::string_view pointer, std::string_view message) const {
  std::ostringstream os;
  os << source_ << ':' << line_of(pointer) << ": " << (pointer.empty() ? "/" : pointer) << ": " << message;
  return os.str();
}

void LocatedJson::reject(std::string_view pointer, std::string_view message, ErrorCode code) const {
  fail(code, describe(pointer, message));
}

}  // namespace flp
