; Mode settling: a startup counter m is walked down to zero at pc 1, after
; which the system enters a two-location steady mode (pc 2 <-> pc 3) it never
; leaves.
(system
  (vars (m Int) (pc Int))
  (init (and (= pc 1) (>= m 0) (<= m 3)))
  (trans
    (rule (and (= pc 1) (> m 0)) ((m (- m 1)) (pc 1)))
    (rule (and (= pc 1) (<= m 0)) ((m m) (pc 2)))
    (rule (= pc 2) ((m m) (pc 3)))
    (rule (= pc 3) ((m m) (pc 2)))))
