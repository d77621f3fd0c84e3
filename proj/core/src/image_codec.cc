/*
 * Copyright 2026 The corrupt3d Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <png.h>
// jpeglib.h needs FILE and size_t.
#include <cstdio>
#include <jpeglib.h>

#include <csetjmp>
#include <cstring>

#include "corrupt3d/dataset_io.h"
#include "corrupt3d/errors.h"

namespace corrupt3d {
namespace {

bool IsPng(std::span<const std::uint8_t> b) {
  static constexpr std::uint8_t kSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  return b.size() >= 8 && std::memcmp(b.data(), kSig, 8) == 0;
}

bool IsJpeg(std::span<const std::uint8_t> b) {
  return b.size() >= 3 && b[0] == 0xff && b[1] == 0xd8 && b[2] == 0xff;
}

ImageBuffer DecodePng(std::span<const std::uint8_t> bytes, std::string_view source) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw MalformedImage(std::string(source) + ": " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  const auto width = static_cast<int>(image.width);
  const auto height = static_cast<int>(image.height);
  if (width < 1 || height < 1) {
    png_image_free(&image);
    throw MalformedImage(std::string(source) + ": empty image");
  }
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw MalformedImage(std::string(source) + ": " + msg);
  }
  return ImageBuffer(width, height, std::move(pixels));
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void JpegErrorExit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

// Only trivially destructible locals live between setjmp and longjmp.
bool DecodeJpegRaw(std::span<const std::uint8_t> bytes, std::vector<std::uint8_t>& pixels,
                   int& width, int& height, char* message) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = JpegErrorExit;
  if (setjmp(err.jump)) {
    std::strncpy(message, err.message, JMSG_LENGTH_MAX);
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  width = static_cast<int>(cinfo.output_width);
  height = static_cast<int>(cinfo.output_height);
  pixels.resize(static_cast<std::size_t>(width) * height * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = pixels.data() + static_cast<std::size_t>(cinfo.output_scanline) * width * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

ImageBuffer DecodeJpeg(std::span<const std::uint8_t> bytes, std::string_view source) {
  std::vector<std::uint8_t> pixels;
  int width = 0, height = 0;
  char message[JMSG_LENGTH_MAX] = {0};
  if (!DecodeJpegRaw(bytes, pixels, width, height, message)) {
    throw MalformedImage(std::string(source) + ": " + message);
  }
  if (width < 1 || height < 1) throw MalformedImage(std::string(source) + ": empty image");
  return ImageBuffer(width, height, std::move(pixels));
}

bool EncodeJpegRaw(const ImageBuffer& img, int quality, unsigned char** out,
                   unsigned long* size, char* message) {
  jpeg_compress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = JpegErrorExit;
  if (setjmp(err.jump)) {
    std::strncpy(message, err.message, JMSG_LENGTH_MAX);
    jpeg_destroy_compress(&cinfo);
    return false;
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, out, size);
  cinfo.image_width = static_cast<JDIMENSION>(img.width());
  cinfo.image_height = static_cast<JDIMENSION>(img.height());
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  while (cinfo.next_scanline < cinfo.image_height) {
    auto* row = const_cast<JSAMPLE*>(img.data().data() +
                                     static_cast<std::size_t>(cinfo.next_scanline) *
                                         img.width() * 3);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  return true;
}

}  // namespace

std::vector<std::uint8_t> EncodePng(const ImageBuffer& img) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_RGB;
  // Fixed settings: non-interlaced, libpng's fast filter and zlib strategy.
  image.flags = PNG_IMAGE_FLAG_FAST;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.data().data(), 0,
                                 nullptr)) {
    throw MalformedImage(std::string("PNG encode: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, img.data().data(), 0,
                                 nullptr)) {
    throw MalformedImage(std::string("PNG encode: ") + image.message);
  }
  out.resize(size);
  return out;
}

std::vector<std::uint8_t> EncodeJpeg(const ImageBuffer& img, int quality) {
  unsigned char* buffer = nullptr;
  unsigned long size = 0;
  char message[JMSG_LENGTH_MAX] = {0};
  if (!EncodeJpegRaw(img, quality, &buffer, &size, message)) {
    std::free(buffer);
    throw MalformedImage(std::string("JPEG encode: ") + message);
  }
  std::vector<std::uint8_t> out(buffer, buffer + size);
  std::free(buffer);
  return out;
}

ImageBuffer DecodeImage(std::span<const std::uint8_t> bytes, std::string_view source) {
  if (IsPng(bytes)) return DecodePng(bytes, source);
  if (IsJpeg(bytes)) return DecodeJpeg(bytes, source);
  throw MalformedImage(std::string(source) + ": not a PNG or JPEG file");
}

ImageBuffer ReadImage(const fs::path& path) {
  return DecodeImage(ReadFileBytes(path), path.string());
}

void WriteImage(const ImageBuffer& img, const fs::path& path) {
  WriteFileAtomic(path, EncodePng(img));
}

}  // namespace corrupt3d
