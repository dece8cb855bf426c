def solution():
    facts = list(extracted_info.items())
    if isinstance(ref_obj, datetime):
        answer = {e for (start, end), e in facts if start <= ref_obj <= end}
    else:
        spans = [span for span, e in facts if e == ref_obj]
        if t_relation == "before":
            anchor = min(start for start, _ in spans)
            ends = [end for (start, end), e in facts if e != ref_obj and end <= anchor]
            answer = {
                e
                for (start, end), e in facts
                if e != ref_obj and ends and end == max(ends)
            }
        else:
            anchor = max(end for _, end in spans)
            starts = [start for (start, end), e in facts if e != ref_obj and start >= anchor]
            answer = {
                e
                for (start, end), e in facts
                if e != ref_obj and starts and start == min(starts)
            }
    return ", ".join(sorted(answer))
