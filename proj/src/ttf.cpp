#include "wordprep/ttf.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <string>

#include "wordprep/errors.hpp"

namespace wordprep::ttf {

namespace {

// Big-endian reader with bounds checks.
struct Reader {
  const std::vector<uint8_t>& d;
  size_t pos = 0;

  void require(size_t n) const {
    if (pos + n > d.size()) throw FontError("truncated font table");
  }
  uint8_t u8() {
    require(1);
    return d[pos++];
  }
  uint16_t u16() {
    require(2);
    uint16_t v = uint16_t(d[pos] << 8 | d[pos + 1]);
    pos += 2;
    return v;
  }
  int16_t i16() { return int16_t(u16()); }
  uint32_t u32() {
    require(4);
    uint32_t v = uint32_t(d[pos]) << 24 | uint32_t(d[pos + 1]) << 16 |
                 uint32_t(d[pos + 2]) << 8 | uint32_t(d[pos + 3]);
    pos += 4;
    return v;
  }
  void skip(size_t n) {
    require(n);
    pos += n;
  }
};

struct TableEntry {
  size_t offset = 0;
  size_t length = 0;
};

constexpr uint32_t tag(char a, char b, char c, char d) {
  return uint32_t(a) << 24 | uint32_t(b) << 16 | uint32_t(c) << 8 | uint32_t(d);
}

// Enumerates the codepoints of the best available cmap subtable into a map.
void parse_cmap(const std::vector<uint8_t>& data, size_t cmap_off, size_t cmap_len,
                std::unordered_map<uint32_t, uint16_t>& out) {
  Reader r{data, cmap_off};
  r.u16();  // version
  const uint16_t n_tables = r.u16();
  size_t best_off = 0;
  int best_rank = -1;
  for (uint16_t i = 0; i < n_tables; ++i) {
    const uint16_t platform = r.u16();
    const uint16_t encoding = r.u16();
    const uint32_t offset = r.u32();
    int rank = -1;
    if (platform == 3 && encoding == 10) rank = 3;       // Windows, UCS-4
    else if (platform == 0 && encoding >= 3) rank = 3;   // Unicode 2.0+
    else if (platform == 3 && encoding == 1) rank = 2;   // Windows, BMP
    else if (platform == 0) rank = 1;
    if (rank > best_rank) {
      best_rank = rank;
      best_off = offset;
    }
  }
  if (best_rank < 0) throw FontError("font has no Unicode cmap subtable");
  if (best_off >= cmap_len) throw FontError("cmap subtable offset out of range");

  Reader s{data, cmap_off + best_off};
  const uint16_t format = s.u16();
  constexpr size_t kMaxMappings = 1u << 21;  // guards pathological files
  if (format == 4) {
    s.u16();  // length
    s.u16();  // language
    const uint16_t seg_count = s.u16() / 2;
    s.u16();  // searchRange
    s.u16();  // entrySelector
    s.u16();  // rangeShift
    std::vector<uint16_t> end_code(seg_count), start_code(seg_count), id_delta(seg_count);
    std::vector<size_t> range_offset_pos(seg_count);
    std::vector<uint16_t> id_range_offset(seg_count);
    for (auto& v : end_code) v = s.u16();
    s.u16();  // reservedPad
    for (auto& v : start_code) v = s.u16();
    for (auto& v : id_delta) v = uint16_t(s.i16());
    for (uint16_t i = 0; i < seg_count; ++i) {
      range_offset_pos[i] = s.pos;
      id_range_offset[i] = s.u16();
    }
    for (uint16_t seg = 0; seg < seg_count; ++seg) {
      if (start_code[seg] == 0xFFFF) continue;
      for (uint32_t cp = start_code[seg]; cp <= end_code[seg] && cp != 0x10000; ++cp) {
        uint16_t gid = 0;
        if (id_range_offset[seg] == 0) {
          gid = uint16_t(cp + id_delta[seg]);
        } else {
          const size_t addr =
              range_offset_pos[seg] + id_range_offset[seg] + 2 * (cp - start_code[seg]);
          if (addr + 1 >= data.size()) continue;
          const uint16_t raw = uint16_t(data[addr] << 8 | data[addr + 1]);
          if (raw == 0) continue;
          gid = uint16_t(raw + id_delta[seg]);
        }
        if (gid != 0 && out.size() < kMaxMappings) out.emplace(cp, gid);
      }
    }
  } else if (format == 12) {
    s.u16();  // reserved
    s.u32();  // length
    s.u32();  // language
    const uint32_t n_groups = s.u32();
    for (uint32_t g = 0; g < n_groups; ++g) {
      const uint32_t start = s.u32();
      const uint32_t end = s.u32();
      const uint32_t start_gid = s.u32();
      for (uint32_t cp = start; cp <= end && cp <= 0x10FFFF; ++cp) {
        if (out.size() >= kMaxMappings) return;
        out.emplace(cp, uint16_t(start_gid + (cp - start)));
        if (cp == 0xFFFFFFFF) break;
      }
    }
  } else {
    throw FontError("unsupported cmap subtable format " + std::to_string(format));
  }
}

// Composite glyph flags.
constexpr uint16_t ARG_1_AND_2_ARE_WORDS = 0x0001;
constexpr uint16_t ARGS_ARE_XY_VALUES = 0x0002;
constexpr uint16_t WE_HAVE_A_SCALE = 0x0008;
constexpr uint16_t MORE_COMPONENTS = 0x0020;
constexpr uint16_t WE_HAVE_AN_X_AND_Y_SCALE = 0x0040;
constexpr uint16_t WE_HAVE_A_TWO_BY_TWO = 0x0080;

// Simple glyph flags.
constexpr uint8_t ON_CURVE = 0x01;
constexpr uint8_t X_SHORT = 0x02;
constexpr uint8_t Y_SHORT = 0x04;
constexpr uint8_t REPEAT = 0x08;
constexpr uint8_t X_SAME_OR_POS = 0x10;
constexpr uint8_t Y_SAME_OR_POS = 0x20;

}  // namespace

Font Font::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FontError("cannot open font " + path.string());
  Font f;
  f.data_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  if (f.data_.size() < 12) throw FontError("font file too small: " + path.string());

  Reader r{f.data_, 0};
  const uint32_t version = r.u32();
  if (version == tag('O', 'T', 'T', 'O')) {
    throw FontError("CFF-outline font not supported (TrueType glyf outlines required): " +
                    path.string());
  }
  if (version != 0x00010000 && version != tag('t', 'r', 'u', 'e')) {
    throw FontError("not a TrueType font: " + path.string());
  }
  const uint16_t num_tables = r.u16();
  r.skip(6);  // searchRange, entrySelector, rangeShift

  std::map<uint32_t, TableEntry> tables;
  for (uint16_t i = 0; i < num_tables; ++i) {
    const uint32_t t = r.u32();
    r.u32();  // checksum
    const uint32_t off = r.u32();
    const uint32_t len = r.u32();
    if (size_t(off) + len > f.data_.size()) {
      throw FontError("font table out of range: " + path.string());
    }
    tables[t] = TableEntry{off, len};
  }
  auto table = [&](uint32_t t, const char* name) -> TableEntry {
    auto it = tables.find(t);
    if (it == tables.end()) {
      throw FontError("font missing required table " + std::string(name) + ": " +
                      path.string());
    }
    return it->second;
  };

  const TableEntry head = table(tag('h', 'e', 'a', 'd'), "head");
  {
    Reader h{f.data_, head.offset + 18};
    f.units_per_em_ = h.u16();
    if (f.units_per_em_ < 16) throw FontError("bad unitsPerEm in " + path.string());
    Reader loc{f.data_, head.offset + 50};
    f.long_loca_ = loc.i16() != 0;
  }
  {
    const TableEntry maxp = table(tag('m', 'a', 'x', 'p'), "maxp");
    Reader m{f.data_, maxp.offset + 4};
    f.num_glyphs_ = m.u16();
  }
  {
    const TableEntry hhea = table(tag('h', 'h', 'e', 'a'), "hhea");
    Reader h{f.data_, hhea.offset + 4};
    f.ascender_ = h.i16();
    f.descender_ = h.i16();
    Reader n{f.data_, hhea.offset + 34};
    f.num_hmetrics_ = n.u16();
  }
  const TableEntry hmtx = table(tag('h', 'm', 't', 'x'), "hmtx");
  f.hmtx_off_ = hmtx.offset;
  f.hmtx_len_ = hmtx.length;
  const TableEntry loca = table(tag('l', 'o', 'c', 'a'), "loca");
  f.loca_off_ = loca.offset;
  f.loca_len_ = loca.length;
  const TableEntry glyf = table(tag('g', 'l', 'y', 'f'), "glyf");
  f.glyf_off_ = glyf.offset;
  f.glyf_len_ = glyf.length;
  const TableEntry cmap = table(tag('c', 'm', 'a', 'p'), "cmap");
  parse_cmap(f.data_, cmap.offset, cmap.length, f.cmap_);
  return f;
}

uint16_t Font::glyph_index(char32_t cp) const {
  auto it = cmap_.find(uint32_t(cp));
  return it == cmap_.end() ? 0 : it->second;
}

uint16_t Font::advance_width(uint16_t glyph_id) const {
  if (num_hmetrics_ == 0) return 0;
  const uint16_t idx = std::min(glyph_id, uint16_t(num_hmetrics_ - 1));
  const size_t off = hmtx_off_ + size_t(idx) * 4;
  if (off + 2 > hmtx_off_ + hmtx_len_) return 0;
  return uint16_t(data_[off] << 8 | data_[off + 1]);
}

GlyphOutline Font::glyph_outline(uint16_t glyph_id) const {
  return outline_recursive(glyph_id, 0);
}

GlyphOutline Font::outline_recursive(uint16_t glyph_id, int depth) const {
  GlyphOutline result;
  if (depth > 8 || glyph_id >= num_glyphs_) return result;

  size_t start = 0, end = 0;
  if (long_loca_) {
    Reader r{data_, loca_off_ + size_t(glyph_id) * 4};
    start = r.u32();
    end = r.u32();
  } else {
    Reader r{data_, loca_off_ + size_t(glyph_id) * 2};
    start = size_t(r.u16()) * 2;
    end = size_t(r.u16()) * 2;
  }
  if (end <= start) return result;  // empty glyph (e.g. space)
  if (end > glyf_len_) throw FontError("glyph offset out of range");

  Reader g{data_, glyf_off_ + start};
  const int16_t n_contours = g.i16();
  g.skip(8);  // xMin, yMin, xMax, yMax

  if (n_contours >= 0) {
    std::vector<uint16_t> end_pts(static_cast<size_t>(n_contours));
    for (auto& e : end_pts) e = g.u16();
    const size_t n_points = end_pts.empty() ? 0 : size_t(end_pts.back()) + 1;
    const uint16_t instr_len = g.u16();
    g.skip(instr_len);

    std::vector<uint8_t> flags;
    flags.reserve(n_points);
    while (flags.size() < n_points) {
      const uint8_t flag = g.u8();
      flags.push_back(flag);
      if (flag & REPEAT) {
        const uint8_t count = g.u8();
        for (uint8_t i = 0; i < count && flags.size() < n_points; ++i) flags.push_back(flag);
      }
    }

    std::vector<OutlinePoint> points(n_points);
    int x = 0;
    for (size_t i = 0; i < n_points; ++i) {
      if (flags[i] & X_SHORT) {
        const int dx = g.u8();
        x += (flags[i] & X_SAME_OR_POS) ? dx : -dx;
      } else if (!(flags[i] & X_SAME_OR_POS)) {
        x += g.i16();
      }
      points[i].x = x;
      points[i].on_curve = (flags[i] & ON_CURVE) != 0;
    }
    int y = 0;
    for (size_t i = 0; i < n_points; ++i) {
      if (flags[i] & Y_SHORT) {
        const int dy = g.u8();
        y += (flags[i] & Y_SAME_OR_POS) ? dy : -dy;
      } else if (!(flags[i] & Y_SAME_OR_POS)) {
        y += g.i16();
      }
      points[i].y = y;
    }

    size_t first = 0;
    for (size_t c = 0; c < end_pts.size(); ++c) {
      const size_t last = end_pts[c];
      if (last >= first && last < n_points) {
        result.contours.emplace_back(points.begin() + long(first), points.begin() + long(last) + 1);
      }
      first = last + 1;
    }
  } else {
    // Composite glyph: recurse into components and transform.
    for (;;) {
      const uint16_t flags = g.u16();
      const uint16_t component_gid = g.u16();
      double dx = 0.0, dy = 0.0;
      if (flags & ARGS_ARE_XY_VALUES) {
        if (flags & ARG_1_AND_2_ARE_WORDS) {
          dx = g.i16();
          dy = g.i16();
        } else {
          dx = int8_t(g.u8());
          dy = int8_t(g.u8());
        }
      } else {
        // Point-matching placement is vanishingly rare; treat as no offset.
        if (flags & ARG_1_AND_2_ARE_WORDS) {
          g.skip(4);
        } else {
          g.skip(2);
        }
      }
      double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
      auto f2dot14 = [&] { return double(g.i16()) / 16384.0; };
      if (flags & WE_HAVE_A_SCALE) {
        a = d = f2dot14();
      } else if (flags & WE_HAVE_AN_X_AND_Y_SCALE) {
        a = f2dot14();
        d = f2dot14();
      } else if (flags & WE_HAVE_A_TWO_BY_TWO) {
        a = f2dot14();
        b = f2dot14();
        c = f2dot14();
        d = f2dot14();
      }
      GlyphOutline component = outline_recursive(component_gid, depth + 1);
      for (auto& contour : component.contours) {
        for (auto& p : contour) {
          const double px = p.x, py = p.y;
          p.x = a * px + c * py + dx;
          p.y = b * px + d * py + dy;
        }
        result.contours.push_back(std::move(contour));
      }
      if (!(flags & MORE_COMPONENTS)) break;
    }
  }
  return result;
}

namespace {

void flatten_quad(double x0, double y0, double cx, double cy, double x1, double y1,
                  int depth, std::vector<Edge>& edges) {
  // Max deviation of a quadratic from its chord is |p0 - 2c + p1| / 4.
  const double dx = x0 - 2.0 * cx + x1;
  const double dy = y0 - 2.0 * cy + y1;
  constexpr double kTol = 0.1;  // px
  if (depth >= 16 || dx * dx + dy * dy <= 16.0 * kTol * kTol) {
    edges.push_back(Edge{x0, y0, x1, y1});
    return;
  }
  const double mx0 = (x0 + cx) / 2.0, my0 = (y0 + cy) / 2.0;
  const double mx1 = (cx + x1) / 2.0, my1 = (cy + y1) / 2.0;
  const double mx = (mx0 + mx1) / 2.0, my = (my0 + my1) / 2.0;
  flatten_quad(x0, y0, mx0, my0, mx, my, depth + 1, edges);
  flatten_quad(mx, my, mx1, my1, x1, y1, depth + 1, edges);
}

}  // namespace

void append_outline_edges(const GlyphOutline& outline, double scale, double origin_x,
                          double origin_y, std::vector<Edge>& edges) {
  auto tx = [&](const OutlinePoint& p) { return origin_x + p.x * scale; };
  auto ty = [&](const OutlinePoint& p) { return origin_y - p.y * scale; };

  for (const auto& contour : outline.contours) {
    if (contour.size() < 2) continue;

    // Normalize so the walk starts at an on-curve point; a contour of only
    // off-curve points starts at an implied midpoint.
    std::vector<OutlinePoint> pts;
    pts.reserve(contour.size() + 1);
    size_t first_on = contour.size();
    for (size_t i = 0; i < contour.size(); ++i) {
      if (contour[i].on_curve) {
        first_on = i;
        break;
      }
    }
    if (first_on == contour.size()) {
      OutlinePoint mid;
      mid.x = (contour.back().x + contour.front().x) / 2.0;
      mid.y = (contour.back().y + contour.front().y) / 2.0;
      mid.on_curve = true;
      pts.push_back(mid);
      pts.insert(pts.end(), contour.begin(), contour.end());
    } else {
      pts.insert(pts.end(), contour.begin() + long(first_on), contour.end());
      pts.insert(pts.end(), contour.begin(), contour.begin() + long(first_on));
    }
    pts.push_back(pts.front());  // close

    double cur_x = tx(pts[0]), cur_y = ty(pts[0]);
    size_t i = 1;
    while (i < pts.size()) {
      const OutlinePoint& p = pts[i];
      if (p.on_curve) {
        edges.push_back(Edge{cur_x, cur_y, tx(p), ty(p)});
        cur_x = tx(p);
        cur_y = ty(p);
        ++i;
      } else {
        // Control point; the segment ends at the next on-curve point or at
        // the implied midpoint before another control point.
        double end_x, end_y;
        if (i + 1 < pts.size() && !pts[i + 1].on_curve) {
          end_x = (tx(p) + tx(pts[i + 1])) / 2.0;
          end_y = (ty(p) + ty(pts[i + 1])) / 2.0;
          flatten_quad(cur_x, cur_y, tx(p), ty(p), end_x, end_y, 0, edges);
          cur_x = end_x;
          cur_y = end_y;
          ++i;
        } else if (i + 1 < pts.size()) {
          end_x = tx(pts[i + 1]);
          end_y = ty(pts[i + 1]);
          flatten_quad(cur_x, cur_y, tx(p), ty(p), end_x, end_y, 0, edges);
          cur_x = end_x;
          cur_y = end_y;
          i += 2;
        } else {
          break;
        }
      }
    }
  }
}

std::vector<float> rasterize_coverage(const std::vector<Edge>& edges, int width, int height) {
  std::vector<float> coverage(size_t(width) * size_t(height), 0.0f);
  constexpr int kSub = 8;
  const int n_lines = height * kSub;

  // Bucket edges by the sub-scanlines they cross.
  struct Cross {
    double x;
    int dir;
  };
  std::vector<std::vector<size_t>> buckets(static_cast<size_t>(n_lines));
  for (size_t e = 0; e < edges.size(); ++e) {
    const double y_lo = std::min(edges[e].y0, edges[e].y1);
    const double y_hi = std::max(edges[e].y0, edges[e].y1);
    if (y_lo == y_hi) continue;
    // Sub-scanline k samples at y = (k + 0.5) / kSub.
    int k0 = int(std::ceil(y_lo * kSub - 0.5));
    int k1 = int(std::floor(y_hi * kSub - 0.5));
    k0 = std::max(k0, 0);
    k1 = std::min(k1, n_lines - 1);
    for (int k = k0; k <= k1; ++k) {
      const double ys = (k + 0.5) / kSub;
      if (ys >= y_lo && ys < y_hi) buckets[size_t(k)].push_back(e);
    }
  }

  std::vector<Cross> crossings;
  for (int k = 0; k < n_lines; ++k) {
    if (buckets[size_t(k)].empty()) continue;
    const double ys = (k + 0.5) / kSub;
    crossings.clear();
    for (const size_t e : buckets[size_t(k)]) {
      const Edge& ed = edges[e];
      const double t = (ys - ed.y0) / (ed.y1 - ed.y0);
      crossings.push_back(Cross{ed.x0 + t * (ed.x1 - ed.x0), ed.y1 > ed.y0 ? 1 : -1});
    }
    std::sort(crossings.begin(), crossings.end(),
              [](const Cross& a, const Cross& b) { return a.x < b.x; });

    const int row = k / kSub;
    float* acc = coverage.data() + size_t(row) * size_t(width);
    // The interval between consecutive crossings is inside the shape iff
    // the winding number is nonzero there.
    int winding = 0;
    double prev_x = 0.0;
    for (const Cross& c : crossings) {
      if (winding != 0) {
        const double xa = std::max(prev_x, 0.0);
        const double xb = std::min(c.x, double(width));
        if (xb > xa) {
          const int p0 = std::max(int(std::floor(xa)), 0);
          const int p1 = std::min(int(std::ceil(xb)) - 1, width - 1);
          for (int p = p0; p <= p1; ++p) {
            const double overlap = std::min(xb, double(p + 1)) - std::max(xa, double(p));
            if (overlap > 0.0) acc[p] += float(overlap / kSub);
          }
        }
      }
      winding += c.dir;
      prev_x = c.x;
    }
  }
  for (auto& v : coverage) v = std::min(v, 1.0f);
  return coverage;
}

}  // namespace wordprep::ttf
