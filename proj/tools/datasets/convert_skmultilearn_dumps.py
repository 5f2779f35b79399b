#!/usr/bin/env python3
"""Convert the Mulan train/test dumps bundled in scikit-multilearn 0.0.1 to ARFF.

The 0.0.1 sdist on PyPI ships bz2-pickled copies of the Mulan default splits
(skmultilearn/data/<name>-{train,test}.dump.bz2). This script rewrites them as
dense ARFF files with the label count encoded MEKA-style in the relation name
(`-C -n`: the last n attributes are labels), which the mlfs loader understands.

Feature names for emotions come from the music.csv copy distributed with
scikit-multiflow 0.4.1 (same rows, same order). Other datasets use Mulan's
generic Att<i> / label names.

usage: convert_skmultilearn_dumps.py <skmultilearn-0.0.1 dir> <out dir> [music.csv]
"""
import bz2
import csv
import os
import pickle
import sys

SCENE_LABELS = ["Beach", "Sunset", "FallFoliage", "Field", "Mountain", "Urban"]


def load(root, name):
    path = os.path.join(root, "skmultilearn", "data", name + ".dump.bz2")
    with bz2.BZ2File(path, "rb") as fh:
        return pickle.load(fh, encoding="latin1")


def names_for(dataset, n_features, n_labels, music_csv):
    if dataset == "emotions" and music_csv:
        with open(music_csv, newline="") as fh:
            header = next(csv.reader(fh))
        return header[n_labels:], header[:n_labels]
    features = ["Att%d" % (i + 1) for i in range(n_features)]
    if dataset == "scene":
        return features, SCENE_LABELS
    return features, ["Class%d" % (i + 1) for i in range(n_labels)]


def write_arff(path, relation, X, Y, feature_names, label_names):
    with open(path, "w") as out:
        out.write("@relation '%s: -C -%d'\n\n" % (relation, len(label_names)))
        for name in feature_names:
            out.write("@attribute %s numeric\n" % name)
        for name in label_names:
            out.write("@attribute %s {0,1}\n" % name)
        out.write("\n@data\n")
        for x, y in zip(X, Y):
            out.write(",".join(repr(float(v)) for v in x))
            out.write(",")
            out.write(",".join(str(int(v)) for v in y))
            out.write("\n")


def main(argv):
    if len(argv) < 3:
        sys.exit(__doc__)
    root, out_dir = argv[1], argv[2]
    music_csv = argv[3] if len(argv) > 3 else None
    os.makedirs(out_dir, exist_ok=True)
    for dataset in ("emotions", "scene", "yeast"):
        for part in ("train", "test"):
            dump = load(root, "%s-%s" % (dataset, part))
            X, Y = dump["X"], dump["y"]
            features, labels = names_for(dataset, X.shape[1], Y.shape[1], music_csv)
            target = os.path.join(out_dir, "%s-%s.arff" % (dataset, part))
            write_arff(target, dataset, X, Y, features, labels)
            print(target, X.shape, Y.shape)


if __name__ == "__main__":
    main(sys.argv)
