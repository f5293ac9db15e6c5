#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pedscan/hog.hpp"
#include "pedscan/nms.hpp"
#include "pedscan/pipeline.hpp"

namespace py = pybind11;
using namespace pedscan;

namespace {

GrayImage image_from_array(const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw py::value_error("expected a 2-D uint8 array");
    const auto h = static_cast<std::size_t>(arr.shape(0));
    const auto w = static_cast<std::size_t>(arr.shape(1));
    std::vector<std::uint8_t> data(arr.data(), arr.data() + h * w);
    return GrayImage(w, h, std::move(data));
}

py::array_t<std::uint8_t> image_to_array(const GrayImage& img) {
    py::array_t<std::uint8_t> arr({img.height, img.width});
    std::copy(img.data.begin(), img.data.end(), arr.mutable_data());
    return arr;
}

py::array_t<float> grid_to_array(const FeatureGrid& grid) {
    py::array_t<float> arr({grid.hb, grid.wb, grid.s});
    std::copy(grid.values.begin(), grid.values.end(), arr.mutable_data());
    return arr;
}

FeatureGrid grid_from_array(const py::array_t<float, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 3) throw py::value_error("expected a 3-D float array [hb][wb][s]");
    FeatureGrid grid(static_cast<std::size_t>(arr.shape(0)), static_cast<std::size_t>(arr.shape(1)),
                     static_cast<std::size_t>(arr.shape(2)));
    std::copy(arr.data(), arr.data() + grid.values.size(), grid.values.begin());
    return grid;
}

ExecConfig exec_of(std::size_t workers) { return ExecConfig::with_workers(workers); }

}  // namespace

PYBIND11_MODULE(_pedscan, m) {
    m.doc() = "Multi-scale sliding-window pedestrian detection (LBP/HOG + linear SVM)";

    py::class_<Detection>(m, "Detection")
        .def_readonly("x", &Detection::x)
        .def_readonly("y", &Detection::y)
        .def_readonly("width", &Detection::width)
        .def_readonly("height", &Detection::height)
        .def_readonly("score", &Detection::score)
        .def_readonly("level", &Detection::level)
        .def("__repr__", &detection_to_json);

    py::class_<SvmModel>(m, "SvmModel")
        .def_readwrite("bias", &SvmModel::bias)
        .def_readwrite("threshold", &SvmModel::threshold);

    m.def("load_pgm", [](const std::string& path) { return image_to_array(load_pgm(path)); });
    m.def("save_pgm", [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a,
                         const std::string& path) { save_pgm(image_from_array(a), path); });
    m.def("downscale",
          [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a,
             std::size_t w, std::size_t h) { return image_to_array(downscale(image_from_array(a), w, h)); });
    m.def(
        "build_pyramid",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a,
           double scale_step) {
            py::list out;
            for (const auto& level : build_pyramid(image_from_array(a), scale_step).levels)
                out.append(py::make_tuple(image_to_array(level.image), level.scale));
            return out;
        },
        py::arg("image"), py::arg("scale_step") = 1.2);

    m.def(
        "lbp_map",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a,
           std::size_t workers) {
            const GrayImage img = image_from_array(a);
            const LbpMap map = lbp_map(img, exec_of(workers));
            py::array_t<std::uint8_t> arr({map.height, map.width});
            std::copy(map.codes.begin(), map.codes.end(), arr.mutable_data());
            return arr;
        },
        py::arg("image"), py::arg("workers") = 1);
    m.def(
        "lbp_block_histograms",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a,
           std::size_t workers) {
            const GrayImage img = image_from_array(a);
            const auto exec = exec_of(workers);
            return grid_to_array(block_histograms(
                cell_histograms(lbp_map(img, exec), LbpBinning::Raw256, exec), exec));
        },
        py::arg("image"), py::arg("workers") = 1);

    m.def(
        "gradient",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a,
           std::size_t workers) {
            const GradientField field = gradient(image_from_array(a), exec_of(workers));
            py::array_t<float> mag({field.height, field.width});
            py::array_t<float> ori({field.height, field.width});
            std::copy(field.magnitude.begin(), field.magnitude.end(), mag.mutable_data());
            std::copy(field.orientation.begin(), field.orientation.end(), ori.mutable_data());
            return py::make_tuple(mag, ori);
        },
        py::arg("image"), py::arg("workers") = 1);
    m.def(
        "hog_block_histograms",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a,
           bool normalize, std::size_t workers) {
            const auto exec = exec_of(workers);
            FeatureGrid grid = hog_block_histograms(gradient(image_from_array(a), exec), exec);
            if (normalize) grid = normalize_blocks(grid);
            return grid_to_array(grid);
        },
        py::arg("image"), py::arg("normalize") = true, py::arg("workers") = 1);

    m.def("load_model", &load_model);
    m.def("save_model", &save_model);

    m.def(
        "score_windows",
        [](const std::optional<py::array_t<float, py::array::c_style | py::array::forcecast>>& fa,
           const std::optional<py::array_t<float, py::array::c_style | py::array::forcecast>>& fb,
           const SvmModel& model, std::size_t workers) {
            std::optional<FeatureGrid> ga, gb;
            if (fa) ga = grid_from_array(*fa);
            if (fb) gb = grid_from_array(*fb);
            const ScoreMap map = score_windows(ga ? &*ga : nullptr, gb ? &*gb : nullptr, model,
                                               exec_of(workers));
            py::array_t<double> arr({map.y_count, map.x_count});
            std::copy(map.scores.begin(), map.scores.end(), arr.mutable_data());
            return arr;
        },
        py::arg("fa"), py::arg("fb"), py::arg("model"), py::arg("workers") = 1);

    m.def("nms_greedy", &nms_greedy, py::arg("detections"), py::arg("overlap_threshold") = 0.5);

    m.def(
        "detect",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a,
           const SvmModel& model, const std::string& variant, double scale_step, double nms_iou,
           std::size_t workers) {
            PipelineConfig config;
            config.variant = parse_variant(variant);
            config.scale_step = scale_step;
            config.nms_overlap = nms_iou;
            config.exec = exec_of(workers);
            return detect(image_from_array(a), model, config);
        },
        py::arg("image"), py::arg("model"), py::arg("variant") = "hoglbp",
        py::arg("scale_step") = 1.2, py::arg("nms_iou") = 0.5, py::arg("workers") = 1);
}
