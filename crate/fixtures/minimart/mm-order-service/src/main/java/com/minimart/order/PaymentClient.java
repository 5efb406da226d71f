package com.minimart.order;

import org.springframework.stereotype.Service;
import org.springframework.web.client.RestTemplate;

@Service
public class PaymentClient {

    private final RestTemplate restTemplate = new RestTemplate();

    public String receipt(Integer paymentId) {
        return restTemplate.getForObject(
                "http://mm-payment-service/api/v1/payment/receipt/" + paymentId, String.class);
    }
}
