from core.weilgroup import WeilGroup, build_atlas, word_text


def _points(job, law, coords_list):
    X = law.variety
    domain = X.descriptor.fraction_field if X.is_dvr else None
    return [job.point(coords, domain) for coords in coords_list]


def group(job, law: str, generators: list, bound: int = None, verify_cocycles: bool = True,
          words: list = None):
    """Atlas of translation charts from words in the generators, plus optional word evaluation."""
    L = job.law(law)
    points = _points(job, L, generators)
    bound = bound if bound is not None else job.word_bound
    atlas = build_atlas(L, points, bound, verify_cocycles=verify_cocycles)
    G = WeilGroup(L)
    evaluated = []
    for word in words or []:
        letters = [(p, int(e)) for p, (_, e) in zip(_points(job, L, [w[0] for w in word]), word)]
        g = G.power_word(letters)
        evaluated.append({"word": word_text(g.word), "identity": G.is_identity(g), **g.rep.to_dict()})
    passed = atlas.verified if verify_cocycles else True
    return {
        "law": law,
        "atlas": atlas.to_dict(),
        "words": evaluated,
        "passed": passed,
        "summary": f"{len(atlas.charts)} charts" + (f", cocycles {'ok' if passed else 'FAILED'}"
                                                     if verify_cocycles else ""),
    }
