#pragma once
#include <string>
#include <vector>

#include "qd/common.hpp"

namespace qd {

// Minimal deterministic SVG emitter. View box = bounding box of the marked
// points padded 20%; styling via classes declared in <defs>, not inline.
class SvgPlot {
  public:
    SvgPlot(int width = 800, int height = 800);

    void add_polyline(const std::vector<cplx>& pts, const std::string& css_class,
                      const std::string& id);
    void add_marker(cplx z, const std::string& css_class, const std::string& id);
    // points that should influence the view box without being drawn
    void extend_view(cplx z);

    std::string render() const;
    void write_file(const std::string& path) const;

  private:
    struct Line {
        std::vector<cplx> pts;
        std::string cls, id;
    };
    struct Marker {
        cplx z;
        std::string cls, id;
    };
    int w_, h_;
    std::vector<Line> lines_;
    std::vector<Marker> markers_;
    double min_x_ = 0, max_x_ = 0, min_y_ = 0, max_y_ = 0;
    bool has_bbox_ = false;
    void bbox(cplx z);
};

} // namespace qd
