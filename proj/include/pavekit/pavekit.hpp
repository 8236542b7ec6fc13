#pragma once

#include "pavekit/cli/commands.hpp"
#include "pavekit/cli/jsonl.hpp"
#include "pavekit/cli/manifest.hpp"
#include "pavekit/core/labels.hpp"
#include "pavekit/core/taxonomy.hpp"
#include "pavekit/core/types.hpp"
#include "pavekit/evalkit/detection.hpp"
#include "pavekit/evalkit/evaluate.hpp"
#include "pavekit/evalkit/generation.hpp"
#include "pavekit/evalkit/judge.hpp"
#include "pavekit/evalkit/predictions.hpp"
#include "pavekit/evalkit/regression.hpp"
#include "pavekit/evalkit/text.hpp"
#include "pavekit/evalkit/vqa.hpp"
#include "pavekit/genkit/generate.hpp"
#include "pavekit/genkit/plan.hpp"
#include "pavekit/genkit/prompts.hpp"
#include "pavekit/genkit/provider.hpp"
#include "pavekit/genkit/templates.hpp"
#include "pavekit/harmonize/spatial.hpp"
#include "pavekit/harmonize/transforms.hpp"
#include "pavekit/ingest/coco.hpp"
#include "pavekit/ingest/color_folder.hpp"
#include "pavekit/ingest/image_dims.hpp"
#include "pavekit/ingest/pci_csv.hpp"
#include "pavekit/ingest/voc.hpp"
#include "pavekit/ingest/yolo.hpp"
#include "pavekit/qa/review.hpp"
#include "pavekit/qa/validate.hpp"
#include "pavekit/report/stats.hpp"
