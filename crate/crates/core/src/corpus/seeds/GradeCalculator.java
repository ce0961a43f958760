import java.util.ArrayList;
import java.util.List;
import java.util.Scanner;

public class GradeCalculator {
    private final List<Double> scores = new ArrayList<>();

    void add(double score) {
        if (score < 0 || score > 100) {
            throw new IllegalArgumentException("score out of range: " + score);
        }
        scores.add(score);
    }

    double average() {
        if (scores.isEmpty()) {
            return 0.0;
        }
        double total = 0;
        for (double s : scores) {
            total += s;
        }
        return total / scores.size();
    }

    char letter(double avg) {
        if (avg >= 85) {
            return 'A';
        } else if (avg >= 70) {
            return 'B';
        } else if (avg >= 55) {
            return 'C';
        } else if (avg >= 40) {
            return 'D';
        }
        return 'E';
    }

    public static void main(String[] args) {
        Scanner sc = new Scanner(System.in);
        GradeCalculator calc = new GradeCalculator();
        int n = sc.nextInt();
        for (int i = 0; i < n; i++) {
            try {
                calc.add(sc.nextDouble());
            } catch (IllegalArgumentException e) {
                System.out.println("Skipped: " + e.getMessage());
            }
        }
        double avg = calc.average();
        System.out.printf("Average %.2f grade %c%n", avg, calc.letter(avg));
    }
}
